use crate::error::{structural, Error, Result};
use crate::forms::Trivector;
use crate::matlin::{MinorTable, PfaffianTable};
use crate::polyring::Polynomial;

/// Turaev's determinant and Pfaffian of a 3-form, with the consistency checks that define them.
#[derive(Debug, Clone)]
pub struct TuraevPair {
    pub det: Polynomial,
    pub pf: Polynomial,
    /// Number of `(i, j)` cofactors that produced the same quotient.
    pub cofactors_checked: usize,
    /// Number of principal Pfaffians that produced the same quotient (odd `n` only).
    pub pfaffians_checked: usize,
}

fn signed_var(n: usize, f: crate::scalars::Field, i: usize, negate: bool) -> Polynomial {
    let x = Polynomial::var(n, f, i);
    if negate {
        x.neg()
    } else {
        x
    }
}

/// `Det(mu)` and `Pf(mu)` from the codimension-one minors of `theta`.
///
/// Every cofactor `det theta(i;j)` is divided by `(-1)^(i+j) x_i x_j` and every principal
/// Pfaffian by `(-1)^i x_i` (0-based); all quotients must agree. For even `n` the
/// determinant must vanish and `Pf` is reported as 0.
pub fn turaev_det_pf(mu: &Trivector) -> Result<TuraevPair> {
    let (n, f) = (mu.n(), mu.field());
    if n < 3 {
        return Err(structural(format!("Det and Pf need n >= 3, got n = {n}")));
    }
    let theta = mu.theta_matrix();
    let mut minors = MinorTable::new(&theta);
    let mut det: Option<Polynomial> = None;
    let mut cofactors = 0;
    for i in 0..n {
        let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
        for j in 0..n {
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let cof = minors.minor(&rows, &cols);
            let divisor = signed_var(n, f, i, (i + j) % 2 == 1).mul(&Polynomial::var(n, f, j));
            let quotient = cof
                .divide_exact(&divisor)
                .map_err(|_| Error::Internal(format!("det theta({};{}) is not divisible by x_{} x_{}", i + 1, j + 1, i + 1, j + 1)))?;
            match &det {
                None => det = Some(quotient),
                Some(d) if d == &quotient => {}
                Some(_) => {
                    return Err(Error::Internal(format!("cofactor ({};{}) gives a different Det", i + 1, j + 1)));
                }
            }
            cofactors += 1;
        }
    }
    let det = det.expect("n >= 3");
    if n % 2 == 0 {
        if !det.is_zero() {
            return Err(Error::Internal("Det is nonzero for an even number of variables".into()));
        }
        return Ok(TuraevPair { det, pf: Polynomial::zero(n, f), cofactors_checked: cofactors, pfaffians_checked: 0 });
    }
    let mut pfaffians = PfaffianTable::new(&theta)?;
    let mut pf: Option<Polynomial> = None;
    for i in 0..n {
        let idx: Vec<usize> = (0..n).filter(|&r| r != i).collect();
        let quotient = pfaffians
            .pfaffian(&idx)
            .divide_exact(&signed_var(n, f, i, i % 2 == 1))
            .map_err(|_| Error::Internal(format!("pf theta({};{}) is not divisible by x_{}", i + 1, i + 1, i + 1)))?;
        match &pf {
            None => pf = Some(quotient),
            Some(p) if p == &quotient => {}
            Some(_) => return Err(Error::Internal(format!("principal Pfaffian {} gives a different Pf", i + 1))),
        }
    }
    let pf = pf.expect("n >= 3");
    if pf.mul(&pf) != det {
        return Err(Error::Internal("Det differs from Pf^2".into()));
    }
    if !pf.is_zero() && pf.homogeneous_degree() != Some(((n - 3) / 2) as u32) {
        return Err(Error::Internal(format!("Pf is not homogeneous of degree {}", (n - 3) / 2)));
    }
    Ok(TuraevPair { det, pf, cofactors_checked: cofactors, pfaffians_checked: n })
}
