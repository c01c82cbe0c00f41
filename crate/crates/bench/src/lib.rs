use dualsvd_core::{random, rng, Complex64, DualMatrix};

/// Feasible complex input with singular values `rank, rank-1, ..., 1`.
pub fn fixture(m: usize, n: usize, rank: usize, seed: u64) -> DualMatrix<Complex64> {
    let values: Vec<f64> = (1..=rank).rev().map(|v| v as f64).collect();
    random::feasible(m, n, &values, &mut rng::stream(seed, (m * 1000 + n) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_feasible_and_seeded() {
        let a = fixture(12, 8, 4, 3);
        assert_eq!(a.shape(), (12, 8));
        assert!(dualsvd_core::cdsvd_exists(&a).exists);
        assert_eq!(a.standard(), fixture(12, 8, 4, 3).standard());
    }
}
