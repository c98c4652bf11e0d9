use crate::algebra::{GradedAlgebra, PdAlgebra};
use crate::error::{structural, Error, Result};
use crate::matlin::{PolyMatrix, ScalarMatrix};
use crate::polyring::Polynomial;
use crate::scalars::{Field, Scalar};

/// The complex `L(A) = (A (x) S, delta)` with `S = k[x_1..x_n]`, `n = b_1(A)`.
///
/// `delta(i)` has one row per basis vector of `A^i` and one column per basis vector of
/// `A^(i+1)`; entry `(u, v)` is `sum_j coeff_v(e_j u) x_j`.
#[derive(Debug, Clone)]
pub struct BggComplex {
    field: Field,
    dims: Vec<usize>,
    deltas: Vec<PolyMatrix>,
}

impl BggComplex {
    pub fn build(alg: &GradedAlgebra) -> Result<Self> {
        let dims = alg.dims().to_vec();
        if dims.first() != Some(&1) {
            return Err(structural("BGG complex needs a connected algebra (b_0 = 1)"));
        }
        let f = alg.field();
        let n = dims.get(1).copied().unwrap_or(0);
        let m = alg.top_degree();
        let mut deltas = Vec::with_capacity(m);
        for i in 0..m {
            let (src, dst) = (dims[i], dims[i + 1]);
            let mut coeffs = vec![vec![f.zero(); n]; src * dst];
            for j in 0..n {
                for u in 0..src {
                    for (v, c) in alg.mul_basis(1, j, i, u).into_iter().enumerate() {
                        coeffs[u * dst + v][j] = c;
                    }
                }
            }
            let entries = coeffs.iter().map(|c| Polynomial::linear(n, f, c)).collect();
            deltas.push(PolyMatrix::new(n, f, src, dst, entries)?);
        }
        let out = BggComplex { field: f, dims, deltas };
        out.check_square_zero()?;
        Ok(out)
    }

    /// Builds `L(A)` for a `PD_3` algebra and checks the shape of its differentials
    /// against the associated 3-form.
    pub fn for_pd3(pd: &PdAlgebra) -> Result<Self> {
        if pd.top_degree() != 3 {
            return Err(structural("expected a PD_3 algebra"));
        }
        let out = Self::build(pd.algebra())?;
        let mu = pd.trivector()?;
        let d1 = out.delta(1);
        if !d1.is_skew() {
            return Err(Error::Internal("delta^1 of a PD_3 algebra is not skew-symmetric".into()));
        }
        if d1 != &mu.theta_matrix() {
            return Err(Error::Internal("delta^1 differs from the matrix of the 3-form".into()));
        }
        if out.delta(2) != &out.delta(0).transpose() {
            return Err(Error::Internal("delta^2 is not the transpose of delta^0".into()));
        }
        Ok(out)
    }

    fn check_square_zero(&self) -> Result<()> {
        for i in 0..self.deltas.len().saturating_sub(1) {
            if !self.deltas[i].mul(&self.deltas[i + 1])?.is_zero() {
                return Err(Error::Internal(format!("delta^{} o delta^{} is not zero", i + 1, i)));
            }
        }
        Ok(())
    }

    /// True iff every consecutive composite vanishes; re-checked on demand by tests.
    pub fn squares_to_zero(&self) -> bool {
        self.check_square_zero().is_ok()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn nvars(&self) -> usize {
        self.dims.get(1).copied().unwrap_or(0)
    }

    pub fn delta(&self, i: usize) -> &PolyMatrix {
        &self.deltas[i]
    }

    pub fn deltas(&self) -> &[PolyMatrix] {
        &self.deltas
    }

    /// `delta^i` evaluated at `a`, or `None` outside `0..m`.
    pub fn eval(&self, i: usize, a: &[Scalar]) -> Result<Option<ScalarMatrix>> {
        match self.deltas.get(i) {
            None => Ok(None),
            Some(d) => d.eval(a).map(Some),
        }
    }

    /// `b_i(A, a) = b_i - rank delta^(i-1)_a - rank delta^i_a` for every degree.
    pub fn twisted_betti(&self, a: &[Scalar]) -> Result<Vec<usize>> {
        if a.len() != self.nvars() {
            return Err(structural(format!("point of length {} for n = {}", a.len(), self.nvars())));
        }
        let mut ranks = Vec::with_capacity(self.deltas.len());
        for d in &self.deltas {
            ranks.push(d.eval(a)?.rank());
        }
        Ok(betti_from_ranks(&self.dims, &ranks))
    }
}

pub(crate) fn betti_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|i| {
            let before = if i == 0 { 0 } else { ranks[i - 1] };
            let after = ranks.get(i).copied().unwrap_or(0);
            dims[i] - before - after
        })
        .collect()
}

/// Twisted Betti numbers from the algebra's own left-multiplication maps.
///
/// Independent of [`BggComplex`]; used to cross-check the evaluated differentials.
pub fn twisted_betti_direct(alg: &GradedAlgebra, a: &[Scalar]) -> Result<Vec<usize>> {
    if a.len() != alg.dim(1) {
        return Err(structural(format!("point of length {} for b_1 = {}", a.len(), alg.dim(1))));
    }
    let ranks: Vec<usize> = (0..alg.top_degree()).map(|i| alg.left_mult_matrix(i, a).rank()).collect();
    Ok(betti_from_ranks(alg.dims(), &ranks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Trivector;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn pd3_complex_matches_displayed_matrix() {
        let f = Field::rational();
        let mu = Trivector::parse("125+345", 5, f).unwrap();
        let c = BggComplex::for_pd3(&PdAlgebra::from_trivector(&mu)).unwrap();
        let expected = PolyMatrix::parse(
            5,
            f,
            &[
                &["0", "x5", "0", "0", "-x2"],
                &["-x5", "0", "0", "0", "x1"],
                &["0", "0", "0", "x5", "-x4"],
                &["0", "0", "-x5", "0", "x3"],
                &["x2", "-x1", "x4", "-x3", "0"],
            ],
        )
        .unwrap();
        assert_eq!(c.delta(1), &expected);
        assert!(c.squares_to_zero());
    }

    #[test]
    fn twisted_betti_paths_agree() {
        let f = gf(7);
        let mu = Trivector::parse("125+345", 5, f).unwrap();
        let pd = PdAlgebra::from_trivector(&mu);
        let c = BggComplex::build(pd.algebra()).unwrap();
        let e1: Vec<Scalar> = [1, 0, 0, 0, 0].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(c.twisted_betti(&e1).unwrap(), vec![0, 2, 2, 0]);
        assert_eq!(twisted_betti_direct(pd.algebra(), &e1).unwrap(), vec![0, 2, 2, 0]);
        let zero = vec![f.zero(); 5];
        assert_eq!(c.twisted_betti(&zero).unwrap(), vec![1, 5, 5, 1]);
    }

    #[test]
    fn exterior_algebra_is_acyclic_off_zero() {
        let f = gf(5);
        let e = GradedAlgebra::exterior(f, 3);
        let c = BggComplex::build(&e).unwrap();
        let a: Vec<Scalar> = [1, 2, 3].iter().map(|&v| f.from_i64(v)).collect();
        assert_eq!(c.twisted_betti(&a).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn zero_form_has_zero_middle_differential() {
        let f = gf(3);
        let pd = PdAlgebra::from_trivector(&Trivector::zero(2, f));
        let c = BggComplex::for_pd3(&pd).unwrap();
        assert!(c.delta(1).is_zero());
    }
}
