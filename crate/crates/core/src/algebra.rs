//! Connected graded-commutative algebras as multiplication tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::forms::Trivector;
use crate::matlin::{combinations, ScalarMatrix};
use crate::scalars::{Field, FieldSpec, Scalar};

/// A connected, finite-type, graded-commutative algebra `A^0 .. A^m`.
///
/// Products `A^i x A^j -> A^(i+j)` for `i, j >= 1` are stored densely; `A^0` is spanned by the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: Field,
    dims: Vec<usize>,
    // key (i, j): flattened [a][b][c] coefficient of basis c of A^(i+j) in e^i_a e^j_b
    table: BTreeMap<(usize, usize), Vec<Scalar>>,
}

/// One basis product: `e^i_a * e^j_b = sum c_l e^(i+j)_l`.
pub type ProductEntry = (usize, usize, usize, usize, Vec<(usize, Scalar)>);

fn sign(odd: bool, f: &Field, x: &Scalar) -> Scalar {
    if odd {
        f.neg(x)
    } else {
        x.clone()
    }
}

impl GradedAlgebra {
    /// Builds and validates an algebra.
    ///
    /// Each listed product also defines its graded-commutative partner unless that partner
    /// is listed too, in which case the two must agree.
    pub fn new(field: Field, dims: Vec<usize>, products: impl IntoIterator<Item = ProductEntry>) -> Result<Self> {
        if dims.first() != Some(&1) {
            return Err(structural("algebra is not connected: b_0 must be 1"));
        }
        let m = dims.len() - 1;
        let mut table = BTreeMap::new();
        for i in 1..=m {
            for j in 1..=m - i {
                table.insert((i, j), vec![field.zero(); dims[i] * dims[j] * dims[i + j]]);
            }
        }
        let mut alg = GradedAlgebra { field, dims, table };
        let mut explicit = std::collections::HashSet::new();
        let entries: Vec<ProductEntry> = products.into_iter().collect();
        for (i, a, j, b, out) in &entries {
            let (i, a, j, b) = (*i, *a, *j, *b);
            if i == 0 || j == 0 || i + j > m || a >= alg.dims[i] || b >= alg.dims[j] {
                return Err(structural(format!("product ({i},{a})*({j},{b}) outside the algebra")));
            }
            if !explicit.insert((i, a, j, b)) {
                return Err(structural(format!("product ({i},{a})*({j},{b}) listed twice")));
            }
            let target = alg.dims[i + j];
            let mut vec = vec![field.zero(); target];
            for (l, c) in out {
                if *l >= target {
                    return Err(structural(format!("product coefficient index {l} outside degree {}", i + j)));
                }
                vec[*l] = field.add(&vec[*l], c);
            }
            alg.set_product(i, a, j, b, &vec);
        }
        for (i, a, j, b, _) in &entries {
            let (i, a, j, b) = (*i, *a, *j, *b);
            if explicit.contains(&(j, b, i, a)) {
                continue;
            }
            let odd = (i * j) % 2 == 1;
            let v: Vec<Scalar> = alg.mul_basis(i, a, j, b).iter().map(|x| sign(odd, &field, x)).collect();
            alg.set_product(j, b, i, a, &v);
        }
        alg.validate()?;
        Ok(alg)
    }

    fn set_product(&mut self, i: usize, a: usize, j: usize, b: usize, v: &[Scalar]) {
        let (bj, bij) = (self.dims[j], self.dims[i + j]);
        let slot = self.table.get_mut(&(i, j)).expect("product degree in range");
        slot[(a * bj + b) * bij..(a * bj + b + 1) * bij].clone_from_slice(v);
    }

    fn validate(&self) -> Result<()> {
        let f = self.field;
        let m = self.top_degree();
        for i in 1..=m {
            for j in 1..=m - i {
                for a in 0..self.dims[i] {
                    for b in 0..self.dims[j] {
                        let odd = (i * j) % 2 == 1;
                        let left = self.mul_basis(i, a, j, b);
                        let right: Vec<Scalar> = self.mul_basis(j, b, i, a).iter().map(|x| sign(odd, &f, x)).collect();
                        if left != right {
                            return Err(structural(format!("graded commutativity fails on ({i},{a})*({j},{b})")));
                        }
                    }
                }
            }
        }
        for i in 1..=m {
            for j in 1..=m - i {
                for k in 1..=m - i - j {
                    for a in 0..self.dims[i] {
                        for b in 0..self.dims[j] {
                            let ab = self.mul_basis(i, a, j, b);
                            for c in 0..self.dims[k] {
                                let mut ec = vec![f.zero(); self.dims[k]];
                                ec[c] = f.one();
                                let lhs = self.mul(i + j, &ab, k, &ec);
                                let mut ea = vec![f.zero(); self.dims[i]];
                                ea[a] = f.one();
                                let bc = self.mul_basis(j, b, k, c);
                                let rhs = self.mul(i, &ea, j + k, &bc);
                                if lhs != rhs {
                                    return Err(structural(format!(
                                        "associativity fails on ({i},{a}),({j},{b}),({k},{c})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `e^i_a * e^j_b` in coordinates of `A^(i+j)` (empty beyond the top degree).
    pub fn mul_basis(&self, i: usize, a: usize, j: usize, b: usize) -> Vec<Scalar> {
        let f = self.field;
        if i + j > self.top_degree() {
            return Vec::new();
        }
        if i == 0 {
            let mut v = vec![f.zero(); self.dims[j]];
            v[b] = f.one();
            return v;
        }
        if j == 0 {
            let mut v = vec![f.zero(); self.dims[i]];
            v[a] = f.one();
            return v;
        }
        let (bj, bij) = (self.dims[j], self.dims[i + j]);
        let slot = &self.table[&(i, j)];
        slot[(a * bj + b) * bij..(a * bj + b + 1) * bij].to_vec()
    }

    /// Product of homogeneous elements given in coordinates.
    pub fn mul(&self, i: usize, x: &[Scalar], j: usize, y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        if i + j > self.top_degree() {
            return Vec::new();
        }
        let mut out = vec![f.zero(); self.dims[i + j]];
        for (a, xa) in x.iter().enumerate() {
            if f.is_zero(xa) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if f.is_zero(yb) {
                    continue;
                }
                let c = f.mul(xa, yb);
                for (l, v) in self.mul_basis(i, a, j, b).iter().enumerate() {
                    if !f.is_zero(v) {
                        out[l] = f.add(&out[l], &f.mul(&c, v));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `u -> a u : A^i -> A^(i+1)` with rows indexed by the source basis.
    pub fn left_mult_matrix(&self, i: usize, a: &[Scalar]) -> ScalarMatrix {
        let f = self.field;
        let (src, dst) = (self.dim(i), self.dim(i + 1));
        let mut m = ScalarMatrix::zeros(f, src, dst);
        if i + 1 > self.top_degree() {
            return m;
        }
        for u in 0..src {
            let mut eu = vec![f.zero(); src];
            eu[u] = f.one();
            for (v, c) in self.mul(1, a, i, &eu).into_iter().enumerate() {
                m.set(u, v, c);
            }
        }
        m
    }

    /// All nonzero basis products `(i, a, j, b, coords)` with `i, j >= 1`, in key order.
    pub fn products(&self) -> Vec<ProductEntry> {
        let f = self.field;
        let mut out = Vec::new();
        for &(i, j) in self.table.keys() {
            for a in 0..self.dims[i] {
                for b in 0..self.dims[j] {
                    let v: Vec<(usize, Scalar)> = self
                        .mul_basis(i, a, j, b)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !f.is_zero(c))
                        .collect();
                    if !v.is_empty() {
                        out.push((i, a, j, b, v));
                    }
                }
            }
        }
        out
    }

    /// The ground field as an algebra concentrated in degree 0.
    pub fn ground(field: Field) -> Self {
        GradedAlgebra::new(field, vec![1], []).expect("ground field is valid")
    }

    /// Exterior algebra on `n` generators; basis of degree `d` is the lexicographic `d`-subsets.
    pub fn exterior(field: Field, n: usize) -> Self {
        let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|d| combinations(n, d)).collect();
        let index: Vec<BTreeMap<Vec<usize>, usize>> =
            subsets.iter().map(|s| s.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect()).collect();
        let mut products = Vec::new();
        for i in 1..=n {
            for j in 1..=n - i {
                for (a, s) in subsets[i].iter().enumerate() {
                    for (b, t) in subsets[j].iter().enumerate() {
                        if s.iter().any(|x| t.contains(x)) {
                            continue;
                        }
                        let inversions = s.iter().map(|x| t.iter().filter(|y| *y < x).count()).sum::<usize>();
                        let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
                        u.sort_unstable();
                        let c = if inversions % 2 == 1 { field.from_i64(-1) } else { field.one() };
                        products.push((i, a, j, b, vec![(index[i + j][&u], c)]));
                    }
                }
            }
        }
        let dims = subsets.iter().map(Vec::len).collect();
        GradedAlgebra::new(field, dims, products).expect("exterior algebra is valid")
    }

    /// Cohomology of the closed orientable surface of genus `g`: `a_i b_i = omega`.
    pub fn surface(field: Field, g: usize) -> Self {
        if g == 0 {
            return GradedAlgebra::sphere(field, 2);
        }
        let products = (0..g).map(|i| (1, 2 * i, 1, 2 * i + 1, vec![(0, field.one())]));
        GradedAlgebra::new(field, vec![1, 2 * g, 1], products).expect("surface algebra is valid")
    }

    /// Cohomology of `S^d`.
    pub fn sphere(field: Field, d: usize) -> Self {
        let mut dims = vec![0; d + 1];
        dims[0] = 1;
        dims[d] = 1;
        GradedAlgebra::new(field, dims, []).expect("sphere algebra is valid")
    }

    /// Cohomology of `S^1 ∨ S^2`: one class in each of degrees 1 and 2, all products zero.
    pub fn circle_wedge_sphere(field: Field) -> Self {
        GradedAlgebra::new(field, vec![1, 1, 1], []).expect("valid")
    }

    /// Tensor product with the Koszul sign `(b⊗c)(b'⊗c') = (-1)^{|c||b'|} bb' ⊗ cc'`.
    ///
    /// The basis of degree `d` lists `e^i_a ⊗ e^j_b` for `i + j = d`, by decreasing `i`, then `a`, then `b`,
    /// so that `B^1 ⊗ 1` precedes `1 ⊗ C^1`.
    pub fn tensor(&self, other: &GradedAlgebra) -> Result<GradedAlgebra> {
        let f = self.field;
        if f != other.field {
            return Err(structural("tensor product of algebras over different fields"));
        }
        let m = self.top_degree() + other.top_degree();
        let mut basis: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); m + 1];
        for (d, slot) in basis.iter_mut().enumerate() {
            for i in (0..=d.min(self.top_degree())).rev() {
                let j = d - i;
                if j > other.top_degree() {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..other.dim(j) {
                        slot.push((i, a, j, b));
                    }
                }
            }
        }
        let index: Vec<BTreeMap<(usize, usize, usize, usize), usize>> =
            basis.iter().map(|s| s.iter().enumerate().map(|(k, v)| (*v, k)).collect()).collect();
        let mut products = Vec::new();
        for d in 1..=m {
            for e in 1..=m - d {
                for (x, &(i, a, j, b)) in basis[d].iter().enumerate() {
                    for (y, &(k, c, l, dd)) in basis[e].iter().enumerate() {
                        if i + k > self.top_degree() || j + l > other.top_degree() {
                            continue;
                        }
                        let left = self.mul_basis(i, a, k, c);
                        let right = other.mul_basis(j, b, l, dd);
                        let odd = (j * k) % 2 == 1;
                        let mut out = Vec::new();
                        for (p, u) in left.iter().enumerate() {
                            if f.is_zero(u) {
                                continue;
                            }
                            for (r, v) in right.iter().enumerate() {
                                if f.is_zero(v) {
                                    continue;
                                }
                                let coef = sign(odd, &f, &f.mul(u, v));
                                out.push((index[d + e][&(i + k, p, j + l, r)], coef));
                            }
                        }
                        if !out.is_empty() {
                            products.push((d, x, e, y, out));
                        }
                    }
                }
            }
        }
        let dims = basis.iter().map(Vec::len).collect();
        GradedAlgebra::new(f, dims, products)
    }

    /// Wedge sum: `B^+ ⊕ C^+` with vanishing cross products; `B` comes first in each degree.
    pub fn wedge(&self, other: &GradedAlgebra) -> Result<GradedAlgebra> {
        let f = self.field;
        if f != other.field {
            return Err(structural("wedge sum of algebras over different fields"));
        }
        let m = self.top_degree().max(other.top_degree());
        let mut dims = vec![1];
        for d in 1..=m {
            dims.push(self.dim(d) + other.dim(d));
        }
        let mut products = Vec::new();
        for (i, a, j, b, out) in self.products() {
            products.push((i, a, j, b, out));
        }
        for (i, a, j, b, out) in other.products() {
            let shift = |deg: usize| self.dim(deg);
            let out = out.into_iter().map(|(l, c)| (l + shift(i + j), c)).collect();
            products.push((i, a + shift(i), j, b + shift(j), out));
        }
        GradedAlgebra::new(f, dims, products)
    }

    /// Same products over another field.
    pub fn change_field(&self, target: Field) -> Result<GradedAlgebra> {
        let products = self
            .products()
            .into_iter()
            .map(|(i, a, j, b, out)| {
                let out = out
                    .into_iter()
                    .map(|(l, c)| Ok((l, target.parse_scalar(&self.field.render(&c))?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((i, a, j, b, out))
            })
            .collect::<Result<Vec<_>>>()?;
        GradedAlgebra::new(target, self.dims.clone(), products)
    }
}

/// A linear functional on the top degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    eps: Vec<Scalar>,
}

impl Orientation {
    pub fn new(field: Field, eps: Vec<Scalar>) -> Result<Self> {
        if eps.iter().all(|c| field.is_zero(c)) {
            return Err(structural("orientation must be nonzero"));
        }
        Ok(Orientation { eps })
    }

    pub fn values(&self) -> &[Scalar] {
        &self.eps
    }

    pub fn apply(&self, field: &Field, top: &[Scalar]) -> Scalar {
        self.eps.iter().zip(top).fold(field.zero(), |acc, (e, t)| field.add(&acc, &field.mul(e, t)))
    }
}

/// Result of the Poincaré-duality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdCheck {
    pub ok: bool,
    /// The first degree `i` whose pairing `A^i x A^(m-i) -> k` is singular.
    pub failing_degree: Option<usize>,
}

/// The matrix `(a, b) -> eps(e^i_a e^(m-i)_b)`.
pub fn pairing_matrix(alg: &GradedAlgebra, eps: &Orientation, i: usize) -> ScalarMatrix {
    let f = alg.field();
    let m = alg.top_degree();
    ScalarMatrix::from_fn(f, alg.dim(i), alg.dim(m - i), |a, b| eps.apply(&f, &alg.mul_basis(i, a, m - i, b)))
}

pub fn verify_pd(alg: &GradedAlgebra, eps: &Orientation) -> PdCheck {
    let m = alg.top_degree();
    if eps.values().len() != alg.dim(m) {
        return PdCheck { ok: false, failing_degree: Some(m) };
    }
    for i in 0..=m {
        let p = pairing_matrix(alg, eps, i);
        if !p.is_square() || p.rank() != p.rows() {
            return PdCheck { ok: false, failing_degree: Some(i) };
        }
    }
    PdCheck { ok: true, failing_degree: None }
}

/// A Poincaré-duality algebra: a graded algebra with an orientation making all pairings perfect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdAlgebra {
    algebra: GradedAlgebra,
    orientation: Orientation,
}

impl PdAlgebra {
    pub fn new(algebra: GradedAlgebra, orientation: Orientation) -> Result<Self> {
        let check = verify_pd(&algebra, &orientation);
        match check.failing_degree {
            Some(i) => Err(Error::NotPoincareDual(i)),
            None => Ok(PdAlgebra { algebra, orientation }),
        }
    }

    /// `e_i e_j = sum_k mu_ijk e_k^∨`, `e_i e_j^∨ = delta_ij omega`, `eps(omega) = 1`.
    pub fn from_trivector(mu: &Trivector) -> Self {
        let (n, f) = (mu.n(), mu.field());
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let out: Vec<(usize, Scalar)> =
                    (0..n).map(|k| (k, mu.coeff(i, j, k))).filter(|(_, c)| !f.is_zero(c)).collect();
                if !out.is_empty() {
                    products.push((1, i, 1, j, out));
                }
            }
            products.push((1, i, 2, i, vec![(0, f.one())]));
            products.push((2, i, 1, i, vec![(0, f.one())]));
        }
        let algebra = GradedAlgebra::new(f, vec![1, n, n, 1], products).expect("PD_3 algebra from a form is valid");
        let orientation = Orientation { eps: vec![f.one()] };
        PdAlgebra::new(algebra, orientation).expect("PD_3 algebra from a form satisfies duality")
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn top_degree(&self) -> usize {
        self.algebra.top_degree()
    }

    pub fn epsilon(&self, top: &[Scalar]) -> Scalar {
        self.orientation.apply(&self.algebra.field(), top)
    }

    /// Rows are coordinates in `A^(m-i)` of `f_k` with `eps(e_j f_k) = delta_jk`.
    pub fn dual_basis(&self, i: usize) -> Result<ScalarMatrix> {
        let p = pairing_matrix(&self.algebra, &self.orientation, i);
        let inv = p.inverse().map_err(|_| Error::NotPoincareDual(i))?;
        Ok(inv.transpose())
    }

    /// `mu_ijk = eps(e_i e_j e_k)`.
    pub fn trivector(&self) -> Result<Trivector> {
        if self.top_degree() != 3 {
            return Err(structural(format!("trivector of a PD_{} algebra", self.top_degree())));
        }
        let a = &self.algebra;
        let f = a.field();
        let n = a.dim(1);
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let ij = a.mul_basis(1, i, 1, j);
                for k in j + 1..n {
                    let mut ek = vec![f.zero(); n];
                    ek[k] = f.one();
                    let c = self.epsilon(&a.mul(2, &ij, 1, &ek));
                    if !f.is_zero(&c) {
                        terms.push(((i, j, k), c));
                    }
                }
            }
        }
        Trivector::from_terms(n, f, terms)
    }

    /// Connected sum with `omega_A = omega_B = omega`; middle degrees list `A` first.
    pub fn connected_sum(&self, other: &PdAlgebra) -> Result<PdAlgebra> {
        let (a, b) = (&self.algebra, &other.algebra);
        let f = a.field();
        let m = a.top_degree();
        if m != b.top_degree() || f != b.field() {
            return Err(structural("connected sum needs PD algebras of the same dimension over one field"));
        }
        if m == 0 || a.dim(m) != 1 || b.dim(m) != 1 {
            return Err(structural("connected sum needs a one-dimensional top degree"));
        }
        let mut dims = vec![1];
        for d in 1..m {
            dims.push(a.dim(d) + b.dim(d));
        }
        dims.push(1);
        let mut products = Vec::new();
        for (part, pd, shift) in [(a, self, 0usize), (b, other, 1)] {
            let offset = |deg: usize| if shift == 1 && deg < m { a.dim(deg) } else { 0 };
            for (i, x, j, y, out) in part.products() {
                if i + j == m {
                    let top: Vec<Scalar> = part.mul_basis(i, x, j, y);
                    let c = pd.epsilon(&top);
                    if !f.is_zero(&c) {
                        products.push((i, x + offset(i), j, y + offset(j), vec![(0, c)]));
                    }
                } else {
                    let out = out.into_iter().map(|(l, c)| (l + offset(i + j), c)).collect();
                    products.push((i, x + offset(i), j, y + offset(j), out));
                }
            }
        }
        let algebra = GradedAlgebra::new(f, dims, products)?;
        PdAlgebra::new(algebra, Orientation { eps: vec![f.one()] })
    }

    /// The canonical inclusion `self -> self # other` (`first = true`) or `other -> self # other`.
    pub fn connected_sum_inclusion(&self, other: &PdAlgebra, first: bool) -> Result<AlgebraMorphism> {
        let sum = self.connected_sum(other)?;
        let (a, b) = (&self.algebra, &other.algebra);
        let f = a.field();
        let m = a.top_degree();
        let src = if first { self } else { other };
        let mut maps = vec![ScalarMatrix::identity(f, 1)];
        for d in 1..m {
            let offset = if first { 0 } else { a.dim(d) };
            let rows = a.dim(d) + b.dim(d);
            maps.push(ScalarMatrix::from_fn(f, rows, src.algebra.dim(d), |r, c| {
                if r == c + offset {
                    f.one()
                } else {
                    f.zero()
                }
            }));
        }
        // omega_src has eps = 1 after normalization; it maps to eps_src(omega) * omega
        maps.push(ScalarMatrix::from_fn(f, 1, 1, |_, _| src.orientation.values()[0].clone()));
        AlgebraMorphism::new(src.algebra.clone(), sum.algebra, maps)
    }

    pub fn tensor(&self, other: &PdAlgebra) -> Result<PdAlgebra> {
        let algebra = self.algebra.tensor(&other.algebra)?;
        let f = algebra.field();
        let top = algebra.top_degree();
        // the top degree of a tensor of PD algebras is spanned by omega_B ⊗ omega_C
        let eps: Vec<Scalar> = (0..algebra.dim(top))
            .map(|k| {
                let (e1, e2) = (self.orientation.values(), other.orientation.values());
                let kb = k / e2.len().max(1);
                let kc = k % e2.len().max(1);
                f.mul(&e1[kb], &e2[kc])
            })
            .collect();
        PdAlgebra::new(algebra, Orientation::new(f, eps)?)
    }

    /// Standard PD structure on the exterior algebra, the torus and surfaces.
    pub fn exterior(field: Field, n: usize) -> Self {
        PdAlgebra::new(GradedAlgebra::exterior(field, n), Orientation { eps: vec![field.one()] }).expect("exterior is PD")
    }

    pub fn surface(field: Field, g: usize) -> Self {
        PdAlgebra::new(GradedAlgebra::surface(field, g), Orientation { eps: vec![field.one()] }).expect("surface is PD")
    }

    /// The isomorphism `(id, g, (Q_A g^-1 Q_B^-1)^T, eps-matching)` for `mu_B = g . mu_A`.
    pub fn iso_from_form_map(&self, target: &PdAlgebra, g: &ScalarMatrix) -> Result<AlgebraMorphism> {
        let mu_a = self.trivector()?;
        let mu_b = target.trivector()?;
        let f = self.field();
        if g.rows() != mu_b.n() || g.cols() != mu_a.n() || mu_a.n() != mu_b.n() {
            return Err(Error::NotEquivalent("g has the wrong shape".into()));
        }
        let moved = mu_a.transform(g).map_err(|e| Error::NotEquivalent(e.to_string()))?;
        if moved != mu_b {
            return Err(Error::NotEquivalent(format!("g . ({mu_a}) = {moved}, not {mu_b}")));
        }
        let qa = pairing_matrix(&self.algebra, &self.orientation, 2);
        let qb = pairing_matrix(&target.algebra, &target.orientation, 2);
        let phi2 = qa.mul(&g.inverse()?)?.mul(&qb.inverse()?)?.transpose();
        let top_a = self.orientation.values()[0].clone();
        let top_b = target.orientation.values()[0].clone();
        let phi3 = ScalarMatrix::from_fn(f, 1, 1, |_, _| f.div(&top_a, &top_b).expect("orientation is nonzero"));
        let maps = vec![ScalarMatrix::identity(f, 1), g.clone(), phi2, phi3];
        AlgebraMorphism::new(self.algebra.clone(), target.algebra.clone(), maps)
    }
}

/// Degree-wise linear maps (columns are images) that are unital and multiplicative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: GradedAlgebra,
    target: GradedAlgebra,
    maps: Vec<ScalarMatrix>,
}

/// Per-degree injectivity and the Prop-4.6 style degree report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub injective: Vec<bool>,
    pub surjective: Vec<bool>,
    /// `eps_B(phi(omega_A))` when both sides carry orientations of the same dimension.
    pub degree: Option<Scalar>,
    /// Whether "injective in every degree iff nonzero degree" holds on this instance.
    pub degree_criterion_holds: Option<bool>,
}

impl AlgebraMorphism {
    pub fn new(source: GradedAlgebra, target: GradedAlgebra, maps: Vec<ScalarMatrix>) -> Result<Self> {
        let f = source.field();
        if target.field() != f {
            return Err(structural("morphism between algebras over different fields"));
        }
        let m = source.top_degree();
        if maps.len() != m + 1 {
            return Err(structural(format!("{} degree maps for an algebra of top degree {m}", maps.len())));
        }
        for (d, phi) in maps.iter().enumerate() {
            if phi.cols() != source.dim(d) || phi.rows() != target.dim(d) {
                return Err(structural(format!("degree-{d} map has the wrong shape")));
            }
        }
        if !f.is_one(maps[0].get(0, 0)) {
            return Err(structural("morphism is not unital"));
        }
        let mor = AlgebraMorphism { source, target, maps };
        if let Some((i, a, j, b)) = mor.first_non_multiplicative() {
            return Err(structural(format!("morphism is not multiplicative on ({i},{a})*({j},{b})")));
        }
        Ok(mor)
    }

    fn first_non_multiplicative(&self) -> Option<(usize, usize, usize, usize)> {
        let m = self.source.top_degree();
        for i in 1..=m {
            for j in 1..=m - i {
                for a in 0..self.source.dim(i) {
                    for b in 0..self.source.dim(j) {
                        let lhs = self.apply(i + j, &self.source.mul_basis(i, a, j, b));
                        let rhs = self.target.mul(i, &self.image(i, a), j, &self.image(j, b));
                        let rhs = if i + j > self.target.top_degree() { Vec::new() } else { rhs };
                        if lhs != rhs {
                            return Some((i, a, j, b));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn source(&self) -> &GradedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedAlgebra {
        &self.target
    }

    pub fn map(&self, d: usize) -> &ScalarMatrix {
        &self.maps[d]
    }

    pub fn image(&self, d: usize, basis_idx: usize) -> Vec<Scalar> {
        self.maps[d].column(basis_idx)
    }

    pub fn apply(&self, d: usize, x: &[Scalar]) -> Vec<Scalar> {
        if d >= self.maps.len() || d > self.target.top_degree() {
            return Vec::new();
        }
        self.maps[d].apply(x).expect("shape checked at construction")
    }

    pub fn identity(alg: &GradedAlgebra) -> Self {
        let f = alg.field();
        let maps = alg.dims().iter().map(|&d| ScalarMatrix::identity(f, d)).collect();
        AlgebraMorphism { source: alg.clone(), target: alg.clone(), maps }
    }

    pub fn check(&self, orientations: Option<(&Orientation, &Orientation)>) -> MorphismReport {
        let injective: Vec<bool> = self.maps.iter().map(|m| m.rank() == m.cols()).collect();
        let surjective: Vec<bool> = self.maps.iter().map(|m| m.rank() == m.rows()).collect();
        let f = self.source.field();
        let m = self.source.top_degree();
        let degree = orientations.filter(|_| m == self.target.top_degree() && self.source.dim(m) == 1).map(|(ea, eb)| {
            // omega_A has eps_A(omega_A) = 1
            let omega = vec![f.invert(&ea.values()[0]).expect("orientation is nonzero")];
            eb.apply(&f, &self.apply(m, &omega))
        });
        let degree_criterion_holds = degree.as_ref().map(|d| injective.iter().all(|&b| b) == !f.is_zero(d));
        MorphismReport { injective, surjective, degree, degree_criterion_holds }
    }
}

/// The pinch morphism `H(S^1 ∨ S^2) -> H(T^2)`: `u -> a`, `s -> omega`.
pub fn pinch_morphism(field: Field) -> AlgebraMorphism {
    let source = GradedAlgebra::circle_wedge_sphere(field);
    let target = GradedAlgebra::exterior(field, 2);
    let one = ScalarMatrix::identity(field, 1);
    let phi1 = ScalarMatrix::from_i64(field, 2, 1, &[1, 0]).expect("shape");
    AlgebraMorphism::new(source, target, vec![one.clone(), phi1, one]).expect("pinch map is a morphism")
}

/// JSON form of an algebra: products are `[i, a, j, b, [[l, "c"], ...]]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub products: Vec<(usize, usize, usize, usize, Vec<(usize, String)>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_algebra(alg: &GradedAlgebra, orientation: Option<&Orientation>) -> Self {
        let f = alg.field();
        AlgebraFile {
            field: f.spec(),
            dims: alg.dims().to_vec(),
            products: alg
                .products()
                .into_iter()
                .map(|(i, a, j, b, out)| (i, a, j, b, out.into_iter().map(|(l, c)| (l, f.render(&c))).collect()))
                .collect(),
            orientation: orientation.map(|o| o.values().iter().map(|c| f.render(c)).collect()),
        }
    }

    /// Builds the algebra over `field` (or the file's own field when `None`).
    pub fn build(&self, field: Option<Field>) -> Result<(GradedAlgebra, Option<Orientation>)> {
        let f = match field {
            Some(f) => f,
            None => crate::scalars::make_field(self.field)?,
        };
        let products = self
            .products
            .iter()
            .map(|(i, a, j, b, out)| {
                let out = out.iter().map(|(l, c)| Ok((*l, f.parse_scalar(c)?))).collect::<Result<Vec<_>>>()?;
                Ok((*i, *a, *j, *b, out))
            })
            .collect::<Result<Vec<_>>>()?;
        let alg = GradedAlgebra::new(f, self.dims.clone(), products)?;
        let orientation = match &self.orientation {
            None => None,
            Some(v) => Some(Orientation::new(f, v.iter().map(|c| f.parse_scalar(c)).collect::<Result<_>>()?)?),
        };
        Ok((alg, orientation))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rational()
    }

    fn vec_i(f: Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn pd3_products() {
        let f = q();
        let mu = Trivector::parse("125+345", 5, f).unwrap();
        let a = PdAlgebra::from_trivector(&mu);
        let alg = a.algebra();
        assert_eq!(alg.dims(), &[1, 5, 5, 1]);
        assert_eq!(alg.mul_basis(1, 0, 1, 1), vec_i(f, &[0, 0, 0, 0, 1]));
        assert_eq!(alg.mul_basis(1, 2, 1, 3), vec_i(f, &[0, 0, 0, 0, 1]));
        assert_eq!(alg.mul_basis(1, 0, 1, 4), vec_i(f, &[0, -1, 0, 0, 0]));
        assert_eq!(a.trivector().unwrap(), mu);
        assert_eq!(a.dual_basis(1).unwrap(), ScalarMatrix::identity(f, 5));
        assert_eq!(a.dual_basis(0).unwrap(), ScalarMatrix::identity(f, 1));

        let e3 = PdAlgebra::from_trivector(&Trivector::parse("123", 3, f).unwrap());
        let ext = GradedAlgebra::exterior(f, 3);
        assert_eq!(e3.algebra().dims(), ext.dims());
        // the exterior algebra, up to identifying e_i^∨ with the complementary monomials
        let phi2 = ScalarMatrix::from_i64(f, 3, 3, &[0, 0, 1, 0, -1, 0, 1, 0, 0]).unwrap();
        let iso = AlgebraMorphism::new(
            e3.algebra().clone(),
            ext,
            vec![ScalarMatrix::identity(f, 1), ScalarMatrix::identity(f, 3), phi2, ScalarMatrix::identity(f, 1)],
        );
        assert!(iso.is_ok(), "{iso:?}");

        let zero = PdAlgebra::from_trivector(&Trivector::zero(2, f));
        assert!(zero.algebra().mul_basis(1, 0, 1, 1).iter().all(|c| f.is_zero(c)));
    }

    #[test]
    fn duality_checks() {
        let f = q();
        let s1s2 = GradedAlgebra::new(f, vec![1, 1, 1, 1], []).unwrap();
        let check = verify_pd(&s1s2, &Orientation::new(f, vec![f.one()]).unwrap());
        assert_eq!(check.failing_degree, Some(1));
        let torus = GradedAlgebra::exterior(f, 2);
        let eps = Orientation::new(f, vec![f.one()]).unwrap();
        assert!(verify_pd(&torus, &eps).ok);
        let t = PdAlgebra::new(torus, eps).unwrap();
        assert_eq!(t.dual_basis(1).unwrap(), ScalarMatrix::from_i64(f, 2, 2, &[0, 1, -1, 0]).unwrap());
        assert!(PdAlgebra::new(GradedAlgebra::circle_wedge_sphere(f), Orientation::new(f, vec![f.one()]).unwrap()).is_err());
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let f = q();
        assert!(GradedAlgebra::new(f, vec![2, 1], []).is_err());
        // odd square must vanish
        assert!(GradedAlgebra::new(f, vec![1, 1, 1], [(1, 0, 1, 0, vec![(0, f.one())])]).is_err());
        // inconsistent explicit partner
        let bad = [(1, 0, 1, 1, vec![(0, f.one())]), (1, 1, 1, 0, vec![(0, f.one())])];
        assert!(GradedAlgebra::new(f, vec![1, 2, 1], bad).is_err());
        // (x y) x = w but x (y x) = -x (x y) = 0
        let nonassoc = [(1, 0, 1, 1, vec![(0, f.one())]), (2, 0, 1, 0, vec![(0, f.one())])];
        assert!(GradedAlgebra::new(f, vec![1, 2, 1, 1], nonassoc).is_err());
    }

    #[test]
    fn connected_sums() {
        let f = q();
        let ii = PdAlgebra::from_trivector(&Trivector::parse("123", 3, f).unwrap());
        let sum = ii.connected_sum(&ii).unwrap();
        assert_eq!(sum.trivector().unwrap(), Trivector::parse("123+456", 6, f).unwrap());
        let trivial = PdAlgebra::from_trivector(&Trivector::zero(0, f));
        let iii = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, f).unwrap());
        assert_eq!(iii.connected_sum(&trivial).unwrap().trivector().unwrap(), iii.trivector().unwrap());
        let t = PdAlgebra::exterior(f, 2);
        let s2 = t.connected_sum(&t).unwrap();
        assert_eq!(s2, PdAlgebra::surface(f, 2));
        assert!(t.connected_sum(&ii).is_err());

        for first in [true, false] {
            let inc = iii.connected_sum_inclusion(&ii, first).unwrap();
            let report = inc.check(None);
            assert!(report.injective.iter().all(|&b| b));
        }
    }

    #[test]
    fn tensor_and_wedge() {
        let f = q();
        let e1 = GradedAlgebra::exterior(f, 1);
        assert_eq!(e1.tensor(&e1).unwrap(), GradedAlgebra::exterior(f, 2));
        let pe1 = PdAlgebra::exterior(f, 1);
        let sigma2 = PdAlgebra::surface(f, 2);
        let prod = sigma2.tensor(&pe1).unwrap();
        assert_eq!(prod.top_degree(), 3);
        // degree-1 basis: a1, b1, a2, b2, then c
        assert_eq!(prod.trivector().unwrap(), Trivector::parse("125+345", 5, f).unwrap());
        let ground = GradedAlgebra::ground(f);
        assert_eq!(sigma2.algebra().tensor(&ground).unwrap(), *sigma2.algebra());

        let torus_e1 = PdAlgebra::exterior(f, 2).tensor(&pe1).unwrap();
        assert_eq!(torus_e1.trivector().unwrap(), Trivector::parse("123", 3, f).unwrap());

        let iii = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, f).unwrap());
        let big = iii.tensor(&pe1).unwrap();
        assert!(verify_pd(big.algebra(), big.orientation()).ok);

        let w = e1.wedge(&GradedAlgebra::sphere(f, 2)).unwrap();
        assert_eq!(w, GradedAlgebra::circle_wedge_sphere(f));
        assert_eq!(e1.wedge(&ground).unwrap(), e1);
        let w2 = e1.wedge(&e1).unwrap();
        assert_eq!(w2.dims(), &[1, 2]);
    }

    #[test]
    fn isomorphisms_from_form_maps() {
        let f = q();
        let iii = PdAlgebra::from_trivector(&Trivector::parse("125+345", 5, f).unwrap());
        let id = iii.iso_from_form_map(&iii, &ScalarMatrix::identity(f, 5)).unwrap();
        assert_eq!(id, AlgebraMorphism::identity(iii.algebra()));
        let swap = ScalarMatrix::from_fn(f, 5, 5, |i, j| if i == [2, 3, 0, 1, 4][j] { f.one() } else { f.zero() });
        let iso = iii.iso_from_form_map(&iii, &swap).unwrap();
        assert!(iso.check(Some((iii.orientation(), iii.orientation()))).injective.iter().all(|&b| b));
        let scale = ScalarMatrix::from_i64(f, 5, 5, &[2, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1]).unwrap();
        assert!(matches!(iii.iso_from_form_map(&iii, &scale), Err(Error::NotEquivalent(_))));
        // a genuinely different target
        let mu = iii.trivector().unwrap();
        let target = PdAlgebra::from_trivector(&mu.transform(&scale).unwrap());
        assert!(iii.iso_from_form_map(&target, &scale).is_ok());
    }

    #[test]
    fn morphism_reports() {
        let f = q();
        let t = PdAlgebra::exterior(f, 2);
        let id = AlgebraMorphism::identity(t.algebra());
        let r = id.check(Some((t.orientation(), t.orientation())));
        assert!(r.injective.iter().all(|&b| b));
        assert_eq!(r.degree, Some(f.one()));
        assert_eq!(r.degree_criterion_holds, Some(true));
        let pinch = pinch_morphism(f);
        assert!(pinch.check(None).injective.iter().all(|&b| b));
        // killing the top class is not multiplicative on the torus
        let bad = AlgebraMorphism::new(
            GradedAlgebra::exterior(f, 2),
            GradedAlgebra::exterior(f, 2),
            vec![ScalarMatrix::identity(f, 1), ScalarMatrix::identity(f, 2), ScalarMatrix::zeros(f, 1, 1)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn json_roundtrip() {
        let f = Field::prime(5).unwrap();
        let t = PdAlgebra::surface(f, 2);
        let file = AlgebraFile::from_algebra(t.algebra(), Some(t.orientation()));
        let text = file.to_json();
        let back = AlgebraFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        let (alg, eps) = back.build(None).unwrap();
        assert_eq!(&alg, t.algebra());
        assert_eq!(eps.as_ref(), Some(t.orientation()));
        assert!(AlgebraFile::from_json("{\"dims\": 3}").is_err());
    }
}
