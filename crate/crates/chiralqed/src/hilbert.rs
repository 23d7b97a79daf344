//! Dense complex matrices and multi-qubit operator placement.
//!
//! Basis convention, used everywhere downstream: each site is ordered
//! (|e⟩, |g⟩); the N-site basis is the Kronecker order with site 0 as the
//! leftmost tensor factor, so |g…g⟩ has index 2^N − 1.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    DMatrix::identity(dim, dim)
}

/// Kronecker product; dimensions (a.rows·b.rows) × (a.cols·b.cols).
pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// σ⁻ = |g⟩⟨e| in the (|e⟩, |g⟩) basis.
pub fn sigma_minus() -> ComplexMatrix {
    let mut m = DMatrix::zeros(2, 2);
    m[(1, 0)] = c(1.0, 0.0);
    m
}

/// S_site⁻ = I ⊗ … ⊗ σ⁻ ⊗ … ⊗ I with σ⁻ at `site`, dimension 2^n_atoms.
///
/// Panics if `site >= n_atoms` or `n_atoms == 0`.
pub fn lowering_operator(site: usize, n_atoms: usize) -> ComplexMatrix {
    assert!(n_atoms >= 1, "need at least one atom");
    assert!(site < n_atoms, "site {site} out of range for {n_atoms} atoms");
    let mut op = if site == 0 {
        sigma_minus()
    } else {
        identity(1 << site)
    };
    if site > 0 {
        op = kronecker(&op, &sigma_minus());
    }
    let trailing = n_atoms - site - 1;
    if trailing > 0 {
        op = kronecker(&op, &identity(1 << trailing));
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        DMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kronecker_of_identities() {
        assert_eq!(kronecker(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kronecker_places_sigma_minus_blocks() {
        let m = kronecker(&sigma_minus(), &identity(2));
        let mut expected = DMatrix::zeros(4, 4);
        expected[(2, 0)] = c(1.0, 0.0);
        expected[(3, 1)] = c(1.0, 0.0);
        assert_eq!(m, expected);
    }

    #[test]
    fn kronecker_entries_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let k = kronecker(&a, &b);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                for p in 0..b.nrows() {
                    for q in 0..b.ncols() {
                        assert_eq!(k[(i * b.nrows() + p, j * b.ncols() + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kronecker_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 3, 2);
        let d = random_matrix(&mut rng, 2, 3);
        let left = kronecker(&kronecker(&a, &b), &d);
        let right = kronecker(&a, &kronecker(&b, &d));
        // entries are triple products; float multiplication regroups
        assert!(max_abs(&(left - right)) < 1e-15);
    }

    #[test]
    fn lowering_single_site() {
        assert_eq!(lowering_operator(0, 1), sigma_minus());
    }

    #[test]
    fn lowering_site_placement() {
        assert_eq!(lowering_operator(1, 2), kronecker(&identity(2), &sigma_minus()));
        assert_eq!(lowering_operator(0, 2), kronecker(&sigma_minus(), &identity(2)));
        assert_eq!(
            lowering_operator(1, 3),
            kronecker(&kronecker(&identity(2), &sigma_minus()), &identity(2))
        );
    }

    #[test]
    fn lowering_is_nilpotent() {
        for n in 1..=3 {
            for site in 0..n {
                let s = lowering_operator(site, n);
                assert!(max_abs(&(&s * &s)) == 0.0);
            }
        }
    }

    #[test]
    fn distinct_site_operators_commute() {
        for n in 2..=3 {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let si = lowering_operator(i, n);
                    let sj = lowering_operator(j, n);
                    assert!(max_abs(&(&si * &sj - &sj * &si)) == 0.0);
                }
            }
        }
    }

    #[test]
    fn dagger_basics() {
        assert_eq!(dagger(&identity(3)), identity(3));
        let sp = dagger(&sigma_minus());
        assert_eq!(sp[(0, 1)], c(1.0, 0.0));
        assert_eq!(sp.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn dagger_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 3, 4);
        assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn trace_is_cyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(&mut rng, 4, 4);
        let b = random_matrix(&mut rng, 4, 4);
        let diff = (&a * &b).trace() - (&b * &a).trace();
        assert!(diff.norm() < 1e-13);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn lowering_rejects_bad_site() {
        lowering_operator(2, 2);
    }
}
