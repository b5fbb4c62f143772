mod common;

use common::oracle_case;

#[test]
fn oracle_projection_satisfies_constraints_and_interpolates() {
    for seed in 0..50 {
        let c = oracle_case(seed);
        assert!(c.constraint_rel <= 1e-10, "seed {seed}: constraints {:e}", c.constraint_rel);
        assert!(c.interpolation_rel <= 1e-8, "seed {seed}: interpolation {:e}", c.interpolation_rel);
        assert!(c.derivative_rel <= 1e-4, "seed {seed}: derivative {:e}", c.derivative_rel);
    }
}
