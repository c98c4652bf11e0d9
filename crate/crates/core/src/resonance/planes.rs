use crate::algebra::GradedAlgebra;
use crate::enumerate::check_budget;
use crate::error::{structural, Result};
use crate::matlin::ResidueField;

use super::locus::PointLocus;

/// Number of 2-dimensional subspaces of `GF(q)^n`.
pub fn plane_count(q: u32, n: usize) -> u128 {
    if n < 2 {
        return 0;
    }
    let q = q as u128;
    let (a, b) = (q.pow(n as u32) - 1, q.pow(n as u32 - 1) - 1);
    a * b / ((q * q - 1) * (q - 1))
}

/// The union of all planes `U ⊆ A^1` with `U · U = 0` in `A^2`, plus the origin when `b_1 >= 1`.
///
/// Planes are enumerated in reduced row echelon form, so each is visited once.
pub fn union_singular_planes(alg: &GradedAlgebra, budget: u64) -> Result<PointLocus> {
    let q = alg.field().order().ok_or_else(|| structural("plane enumeration needs a finite field"))?;
    let f = alg.field();
    let n = alg.dim(1);
    let b2 = if alg.top_degree() >= 2 { alg.dim(2) } else { 0 };
    check_budget(plane_count(q, n), budget)?;
    let mut out = if n == 0 { PointLocus::empty(q, n, budget)? } else { PointLocus::origin(q, n, budget)? };
    let rf = ResidueField::new(q);
    // prod[(j * n + l) * b2 + w] = coefficient of the w-th basis vector in e_j e_l
    let mut prod = vec![0u32; n * n * b2];
    for j in 0..n {
        for l in 0..n {
            for (w, c) in alg.mul_basis(1, j, 1, l).iter().enumerate() {
                prod[(j * n + l) * b2 + w] = f.residue(c);
            }
        }
    }
    let mut u = vec![0u32; n];
    let mut v = vec![0u32; n];
    let mut uv = vec![0u32; b2];
    let mut pt = vec![0u32; n];
    for p1 in 0..n {
        for p2 in p1 + 1..n {
            let u_free: Vec<usize> = (p1 + 1..n).filter(|&c| c != p2).collect();
            let v_free: Vec<usize> = (p2 + 1..n).collect();
            let mut uc = vec![0u32; u_free.len()];
            loop {
                u.fill(0);
                u[p1] = 1;
                for (&c, &a) in u_free.iter().zip(&uc) {
                    u[c] = a;
                }
                let mut vc = vec![0u32; v_free.len()];
                loop {
                    v.fill(0);
                    v[p2] = 1;
                    for (&c, &a) in v_free.iter().zip(&vc) {
                        v[c] = a;
                    }
                    uv.fill(0);
                    for j in (0..n).filter(|&j| u[j] != 0) {
                        for l in (0..n).filter(|&l| v[l] != 0) {
                            let s = rf.mul(u[j], v[l]);
                            for w in 0..b2 {
                                uv[w] = rf.add(uv[w], rf.mul(s, prod[(j * n + l) * b2 + w]));
                            }
                        }
                    }
                    if uv.iter().all(|&c| c == 0) {
                        for s in 0..q {
                            for t in 0..q {
                                for (slot, (&a, &b)) in pt.iter_mut().zip(u.iter().zip(&v)) {
                                    *slot = rf.add(rf.mul(s, a), rf.mul(t, b));
                                }
                                out.insert(&pt);
                            }
                        }
                    }
                    if !crate::enumerate::next_point(q, &mut vc) {
                        break;
                    }
                }
                if !crate::enumerate::next_point(q, &mut uc) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PdAlgebra;
    use crate::forms::Trivector;
    use crate::resonance::{BggComplex, ResonanceProfile, SweepOptions};
    use crate::scalars::Field;

    #[test]
    fn counts_planes() {
        assert_eq!(plane_count(3, 4), 130);
        assert_eq!(plane_count(2, 3), 7);
        assert_eq!(plane_count(5, 1), 0);
    }

    #[test]
    fn form_three_matches_sweep() {
        let f = Field::prime(3).unwrap();
        let pd = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, f).unwrap());
        let planes = union_singular_planes(pd.algebra(), 1 << 20).unwrap();
        let c = BggComplex::for_pd3(&pd).unwrap();
        let pr = ResonanceProfile::compute(&c, SweepOptions::default()).unwrap();
        assert_eq!(planes, pr.locus(1, 1));
    }

    #[test]
    fn exterior_and_zero_form() {
        let f = Field::prime(3).unwrap();
        assert!(union_singular_planes(&GradedAlgebra::exterior(f, 3), 1000).unwrap().is_origin());
        let zero = PdAlgebra::from_trivector(&Trivector::zero(2, f));
        assert!(union_singular_planes(zero.algebra(), 1000).unwrap().is_full());
    }
}
