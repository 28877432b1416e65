use ccasim::fabric::{random_traffic_trial, throttle_period, ChipConfig, Topology};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_traffic_always_drains(
        dx in 2u32..9,
        dy in 2u32..9,
        torus in any::<bool>(),
        capacity in 1u32..5,
        vcs in 2u32..6,
        load in 1usize..8,
        seed in any::<u64>(),
    ) {
        let topology = if torus { Topology::TorusMesh } else { Topology::Mesh };
        let mut cfg = ChipConfig::new(dx, dy, topology);
        cfg.vc_buffer_capacity = capacity;
        cfg.vc_count = vcs;
        let rep = random_traffic_trial(&cfg, load * cfg.num_cells(), seed, 1_000_000);
        prop_assert!(rep.clean(), "{rep:?}");
    }

    #[test]
    fn torus_period_is_half_of_mesh(d in 2u32..200) {
        let mesh = throttle_period(&ChipConfig::new(d, d, Topology::Mesh));
        let torus = throttle_period(&ChipConfig::new(d, d, Topology::TorusMesh));
        prop_assert_eq!(torus, mesh / 2);
    }
}
