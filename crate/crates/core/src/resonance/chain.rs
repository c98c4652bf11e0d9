use crate::algebra::{AlgebraMorphism, GradedAlgebra};
use crate::error::{structural, Result};
use crate::matlin::{PolyMatrix, ScalarMatrix};
use crate::polyring::Polynomial;
use crate::scalars::Scalar;

use super::bgg::BggComplex;

/// The maps `phi^i ⊗ Sym(psi_1) : L(A) -> L(B)` and which squares commute.
#[derive(Debug, Clone)]
pub struct ChainMapReport {
    /// `Psi` with `Phi_1^T Psi = I`; column `j` is `psi_1(x_j)` in the `y` basis.
    pub splitting: ScalarMatrix,
    /// Images `psi_1(x_j)` as linear forms in `y_1..y_p`.
    pub substitution: Vec<Polynomial>,
    /// `(phi^(i+1) ⊗ Sym psi) delta^i_A` as a matrix over `k[y]` (rows: basis of `A^i`).
    pub upper: Vec<PolyMatrix>,
    /// `delta^i_B (phi^i ⊗ Sym psi)` over `k[y]`.
    pub lower: Vec<PolyMatrix>,
    /// Square `i` commutes as polynomial matrices over `k[y]`.
    pub symbolic: Vec<bool>,
    /// Square `i` commutes after restricting `y` to the image `y = Phi_1 x`.
    pub on_image: Vec<bool>,
}

impl ChainMapReport {
    pub fn commutes_symbolically(&self) -> bool {
        self.symbolic.iter().all(|&b| b)
    }

    pub fn commutes_on_image(&self) -> bool {
        self.on_image.iter().all(|&b| b)
    }
}

/// A splitting built from a maximal set of independent rows of `Phi_1`.
pub fn default_splitting(phi: &AlgebraMorphism) -> Result<ScalarMatrix> {
    let f = phi.source().field();
    let m1 = phi.map(1);
    let (p, n) = (m1.rows(), m1.cols());
    let (_, rows) = m1.transpose().rref();
    if rows.len() != n {
        return Err(structural("phi^1 is not injective, so its dual has no splitting"));
    }
    let square = ScalarMatrix::from_fn(f, n, n, |r, c| m1.get(rows[r], c).clone());
    let inv_t = square.inverse()?.transpose();
    let mut psi = ScalarMatrix::zeros(f, p, n);
    for (r, &l) in rows.iter().enumerate() {
        for c in 0..n {
            psi.set(l, c, inv_t.get(r, c).clone());
        }
    }
    Ok(psi)
}

/// Builds `L(phi)` for an injective morphism and checks every square of the diagram.
///
/// `psi = None` uses [`default_splitting`].
pub fn bgg_chain_map(phi: &AlgebraMorphism, psi: Option<&ScalarMatrix>) -> Result<ChainMapReport> {
    let (a, b) = (phi.source(), phi.target());
    let f = a.field();
    for d in 0..=a.top_degree() {
        if phi.map(d).rank() != phi.map(d).cols() {
            return Err(structural(format!("phi^{d} is not injective")));
        }
    }
    let splitting = match psi {
        Some(s) => s.clone(),
        None => default_splitting(phi)?,
    };
    let m1 = phi.map(1);
    let (p, n) = (m1.rows(), m1.cols());
    if splitting.rows() != p || splitting.cols() != n {
        return Err(structural("splitting has the wrong shape"));
    }
    if m1.transpose().mul(&splitting)? != ScalarMatrix::identity(f, n) {
        return Err(structural("psi_1 is not a splitting of the dual of phi^1"));
    }
    let ca = BggComplex::build(a)?;
    let cb = BggComplex::build(b)?;
    let substitution: Vec<Polynomial> =
        (0..n).map(|j| Polynomial::linear(p, f, &splitting.column(j))).collect();
    let restrict: Vec<Polynomial> = (0..p).map(|l| Polynomial::linear(n, f, m1.row(l))).collect();
    let (mut upper, mut lower, mut symbolic, mut on_image) = (vec![], vec![], vec![], vec![]);
    for i in 0..a.top_degree() {
        let up = ca.delta(i).substitute(&substitution)?.scalar_right_mul(&phi.map(i + 1).transpose())?;
        let low = match cb.deltas().get(i) {
            Some(d) => d.scalar_left_mul(&phi.map(i).transpose())?,
            None => PolyMatrix::zeros(p, f, a.dim(i), b.dim(i + 1)),
        };
        symbolic.push(up == low);
        on_image.push(up.substitute(&restrict)? == low.substitute(&restrict)?);
        upper.push(up);
        lower.push(low);
    }
    Ok(ChainMapReport { splitting, substitution, upper, lower, symbolic, on_image })
}

fn stack(field: crate::scalars::Field, cols: usize, rows: &[Vec<Scalar>]) -> Result<ScalarMatrix> {
    ScalarMatrix::new(field, rows.len(), cols, rows.concat())
}

fn row_space(m: &ScalarMatrix) -> Vec<Vec<Scalar>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn cocycles(alg: &GradedAlgebra, i: usize, a: &[Scalar]) -> Vec<Vec<Scalar>> {
    alg.left_mult_matrix(i, a).transpose().rank_and_kernel().1
}

/// Whether `phi^i_a : H^i(A, a) -> H^i(B, phi(a))` is injective.
pub fn induced_injective(phi: &AlgebraMorphism, i: usize, a: &[Scalar]) -> Result<bool> {
    let (src, dst) = (phi.source(), phi.target());
    if a.len() != src.dim(1) {
        return Err(structural("point has the wrong length"));
    }
    if i > src.top_degree() {
        return Ok(true);
    }
    let f = src.field();
    let b = phi.apply(1, a);
    let z = cocycles(src, i, a);
    let bound_a = if i == 0 { 0 } else { src.left_mult_matrix(i - 1, a).rank() };
    let im_b = if i == 0 || i > dst.top_degree() { Vec::new() } else { row_space(&dst.left_mult_matrix(i - 1, &b)) };
    let width = dst.dim(i);
    let rank_b = stack(f, width, &im_b)?.rank();
    let mut all = im_b;
    all.extend(z.iter().map(|v| phi.apply(i, v)));
    let rank_all = stack(f, width, &all)?.rank();
    // kernel of Z_A -> B^i / Im_B has dimension |Z_A| - (rank_all - rank_b)
    Ok(z.len() + rank_b - rank_all == bound_a)
}
