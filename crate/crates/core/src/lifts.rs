//! Tensor fields on the total spaces of `E` and `E*`.
//!
//! Coordinates on a total space are ordered `(x^1..x^m, z^1..z^n)` where `z`
//! is `y` on `E` and `xi` on `E*`. Direction `d < m` is `d/dx^{d+1}`; direction
//! `m + i` is the fiber direction `d/dz^{i+1}`. A bivector coefficient stored at
//! `(A, B)` with `A < B` is the tensor component `T^{AB}`.

use std::collections::BTreeMap;

use crate::algebroid::{Algebroid, AnchorSide, Bundle, EndoTensor, FiberForm, FiberMultivector, Section};
use crate::calculus;
use crate::error::{Error, Result};
use crate::exterior::{render_terms, Alternating, Indices};
use crate::poly::{Polynomial, VarKind, VarSpace, Variable};

/// Frame marker for coordinate directions on a total space.
#[derive(Debug)]
pub enum SpaceFrame {}

/// Total space of `E` or `E*` over named base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalSpace {
    bundle: Bundle,
    base_names: Vec<String>,
    rank: usize,
}

impl TotalSpace {
    pub fn new(bundle: Bundle, base_names: Vec<String>, rank: usize) -> Self {
        TotalSpace { bundle, base_names, rank }
    }

    /// Total space of the bundle whose sections carry `a`.
    pub fn carrier_of(a: &Algebroid) -> Self {
        Self::new(a.carrier(), a.base_names().to_vec(), a.rank())
    }

    /// Total space on which the linear tensor of `a` lives.
    pub fn linear_tensor_of(a: &Algebroid) -> Self {
        Self::new(a.carrier().dual(), a.base_names().to_vec(), a.rank())
    }

    pub fn bundle(&self) -> Bundle {
        self.bundle
    }

    pub fn base_dim(&self) -> usize {
        self.base_names.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.base_dim() + self.rank
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    /// Coordinate for direction `d`.
    pub fn coordinate(&self, d: usize) -> Variable {
        let m = self.base_dim();
        if d < m {
            Variable::base(d)
        } else {
            self.bundle.fiber_var(d - m)
        }
    }

    pub fn fiber_var(&self, i: usize) -> Variable {
        self.bundle.fiber_var(i)
    }

    pub fn fiber_direction(&self, i: usize) -> usize {
        self.base_dim() + i
    }

    pub fn names(&self) -> VarSpace {
        let base = VarSpace::base(self.base_names.clone());
        match self.bundle {
            Bundle::E => base.with_fiber(self.rank),
            Bundle::EDual => base.with_dual_fiber(self.rank),
        }
    }

    /// `dx1`, `dy3`, `dxi2`.
    pub fn direction_name(&self, d: usize) -> String {
        format!("d{}", self.names().name(self.coordinate(d)))
    }

    fn same_shape(&self, other: &TotalSpace) -> bool {
        self.base_names == other.base_names
    }

    fn require_same(&self, other: &TotalSpace) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch(format!(
                "{} of rank {} against {} of rank {}",
                self.bundle, self.rank, other.bundle, other.rank
            )));
        }
        Ok(())
    }
}

/// Skew multivector field on a total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMultivector {
    space: TotalSpace,
    field: Alternating<SpaceFrame>,
}

impl SpaceMultivector {
    pub fn zero(space: &TotalSpace, degree: usize) -> Self {
        SpaceMultivector { space: space.clone(), field: Alternating::zero(space.dim(), degree) }
    }

    pub fn function(space: &TotalSpace, f: Polynomial) -> Self {
        SpaceMultivector { space: space.clone(), field: Alternating::scalar(space.dim(), f) }
    }

    /// `f d_{A1} ^ ... ^ d_{Ak}`.
    pub fn monomial(space: &TotalSpace, directions: &[usize], f: Polynomial) -> Self {
        SpaceMultivector { space: space.clone(), field: Alternating::monomial(space.dim(), directions, f) }
    }

    pub fn vector_field(space: &TotalSpace, components: &[Polynomial]) -> Self {
        assert_eq!(components.len(), space.dim());
        SpaceMultivector { space: space.clone(), field: Alternating::from_vector(components) }
    }

    pub fn from_field(space: &TotalSpace, field: Alternating<SpaceFrame>) -> Self {
        assert_eq!(field.dim(), space.dim());
        SpaceMultivector { space: space.clone(), field }
    }

    pub fn space(&self) -> &TotalSpace {
        &self.space
    }

    pub fn field(&self) -> &Alternating<SpaceFrame> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    pub fn component(&self, directions: &[usize]) -> Polynomial {
        self.field.component(directions)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Indices, &Polynomial)> {
        self.field.terms()
    }

    pub fn scalar_part(&self) -> Polynomial {
        self.field.scalar_part()
    }

    pub fn scale(&self, f: &Polynomial) -> Self {
        Self::from_field(&self.space, self.field.scale(f))
    }

    pub fn neg(&self) -> Self {
        Self::from_field(&self.space, -&self.field)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self::from_field(&self.space, &self.field + &other.field))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self::from_field(&self.space, &self.field - &other.field))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.space.require_same(&other.space)?;
        Ok(Self::from_field(&self.space, self.field.wedge(&other.field)))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.space.require_same(&other.space)?;
        if self.degree() != other.degree() {
            return Err(Error::Degree(format!("degrees {} and {}", self.degree(), other.degree())));
        }
        Ok(())
    }

    /// A vector field acting on a function.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.degree() != 1 {
            return Err(Error::Degree("only vector fields act on functions".into()));
        }
        let mut acc = Polynomial::zero();
        for (idx, c) in self.field.terms() {
            acc += c * &f.partial(self.space.coordinate(idx[0] as usize));
        }
        Ok(acc)
    }

    /// Largest total degree in the fiber coordinates over all components.
    pub fn fiber_degree(&self) -> u32 {
        let kind = self.space.bundle.fiber_kind();
        self.field.terms().map(|(_, c)| c.degree_in(kind)).max().unwrap_or(0)
    }

    /// Simultaneous substitution in every coefficient.
    pub fn substitute(&self, bindings: &BTreeMap<Variable, Polynomial>) -> Self {
        Self::from_field(&self.space, self.field.map_coefficients(|c| c.substitute(bindings)))
    }

    pub fn to_tensor2(&self) -> Result<SpaceTensor2> {
        if self.degree() != 2 {
            return Err(Error::Degree(format!("expected a bivector, got degree {}", self.degree())));
        }
        let mut t = SpaceTensor2::zero(&self.space);
        for (idx, c) in self.field.terms() {
            let (a, b) = (idx[0] as usize, idx[1] as usize);
            t.comps[a][b] += c;
            t.comps[b][a] -= c;
        }
        Ok(t)
    }

    pub fn render(&self) -> String {
        let names = self.space.names();
        render_terms(self.field.terms(), |d| self.space.direction_name(d), |c| c.display(&names).to_string())
    }
}

/// General 2-contravariant tensor field on a total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTensor2 {
    space: TotalSpace,
    comps: Vec<Vec<Polynomial>>,
}

impl SpaceTensor2 {
    pub fn zero(space: &TotalSpace) -> Self {
        let d = space.dim();
        SpaceTensor2 { space: space.clone(), comps: vec![vec![Polynomial::zero(); d]; d] }
    }

    pub fn space(&self) -> &TotalSpace {
        &self.space
    }

    pub fn get(&self, a: usize, b: usize) -> &Polynomial {
        &self.comps[a][b]
    }

    pub fn set(&mut self, a: usize, b: usize, p: Polynomial) {
        self.comps[a][b] = p;
    }

    pub fn is_skew(&self) -> bool {
        let d = self.space.dim();
        (0..d).all(|a| (0..d).all(|b| self.comps[a][b] == -&self.comps[b][a]))
    }

    pub fn to_bivector(&self) -> Result<SpaceMultivector> {
        if !self.is_skew() {
            return Err(Error::NotSkew);
        }
        let d = self.space.dim();
        let mut field = Alternating::zero(d, 2);
        for a in 0..d {
            for b in a + 1..d {
                field.add_component(vec![a as u16, b as u16], self.comps[a][b].clone());
            }
        }
        Ok(SpaceMultivector::from_field(&self.space, field))
    }

    /// `T(df, dg)`.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let d = self.space.dim();
        let df: Vec<Polynomial> = (0..d).map(|a| f.partial(self.space.coordinate(a))).collect();
        let dg: Vec<Polynomial> = (0..d).map(|a| g.partial(self.space.coordinate(a))).collect();
        let mut acc = Polynomial::zero();
        for a in 0..d {
            if df[a].is_zero() {
                continue;
            }
            for b in 0..d {
                let c = &self.comps[a][b];
                if !c.is_zero() && !dg[b].is_zero() {
                    acc += c * &df[a] * &dg[b];
                }
            }
        }
        acc
    }

    pub fn substitute(&self, bindings: &BTreeMap<Variable, Polynomial>) -> Self {
        SpaceTensor2 {
            space: self.space.clone(),
            comps: self.comps.iter().map(|r| r.iter().map(|c| c.substitute(bindings)).collect()).collect(),
        }
    }
}

/// `{f, g}` for a bivector field.
pub fn poisson_bracket(pi: &SpaceMultivector, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    Ok(pi.to_tensor2()?.bracket(f, g))
}

/// `X^i xi_i`, a fiber-linear function on the dual of the carrier.
pub fn iota_dual(a: &Algebroid, x: &Section) -> Polynomial {
    linear_function(a.carrier().dual(), &x.0)
}

/// `mu_i y^i`, a fiber-linear function on the carrier.
pub fn iota(a: &Algebroid, mu: &FiberForm) -> Polynomial {
    linear_function(a.carrier(), &mu.to_vector())
}

fn linear_function(bundle: Bundle, comps: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for (i, c) in comps.iter().enumerate() {
        if !c.is_zero() {
            acc += c * &Polynomial::var(bundle.fiber_var(i));
        }
    }
    acc
}

/// The linear tensor
/// `c^k_ij xi_k d_xi_i (x) d_xi_j + d^a_i d_xi_i (x) d_x^a - s^a_i d_x^a (x) d_xi_i`.
pub fn to_linear_tensor(a: &Algebroid) -> SpaceTensor2 {
    let space = TotalSpace::linear_tensor_of(a);
    let (m, n) = (a.base_dim(), a.rank());
    let mut t = SpaceTensor2::zero(&space);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                let c = a.structure(i, j, k);
                if !c.is_zero() {
                    acc += c * &Polynomial::var(space.fiber_var(k));
                }
            }
            t.comps[m + i][m + j] = acc;
        }
        for b in 0..m {
            t.comps[m + i][b] = a.anchor(AnchorSide::Left, i, b).clone();
            t.comps[b][m + i] = -a.anchor(AnchorSide::Right, i, b);
        }
    }
    t
}

/// The linear bivector of a skew structure.
pub fn to_linear_bivector(a: &Algebroid) -> Result<SpaceMultivector> {
    a.require_skew()?;
    to_linear_tensor(a).to_bivector()
}

/// Read structure functions and anchors back from a linear tensor.
pub fn from_linear_tensor(t: &SpaceTensor2) -> Result<Algebroid> {
    let space = &t.space;
    let (m, n) = (space.base_dim(), space.rank());
    let fibers: Vec<Variable> = (0..n).map(|i| space.fiber_var(i)).collect();
    let kind = space.bundle.fiber_kind();
    let label = |a: usize, b: usize| format!("({},{})", space.direction_name(a), space.direction_name(b));
    let names = space.names();
    let bad = |a: usize, b: usize, p: &Polynomial| Error::NotLinear {
        component: label(a, b),
        value: p.display(&names).to_string(),
    };
    let mut structure = vec![vec![vec![Polynomial::zero(); n]; n]; n];
    let mut left = vec![vec![Polynomial::zero(); m]; n];
    let mut right = vec![vec![Polynomial::zero(); m]; n];
    for i in 0..n {
        for j in 0..n {
            let p = &t.comps[m + i][m + j];
            let parts = p.linear_decomposition(&fibers).ok_or_else(|| bad(m + i, m + j, p))?;
            structure[i][j] = parts;
        }
        for b in 0..m {
            let p = &t.comps[m + i][b];
            if p.mentions_kind(kind) {
                return Err(bad(m + i, b, p));
            }
            left[i][b] = p.clone();
            let q = &t.comps[b][m + i];
            if q.mentions_kind(kind) {
                return Err(bad(b, m + i, q));
            }
            right[i][b] = -q;
        }
    }
    for a in 0..m {
        for b in 0..m {
            let p = &t.comps[a][b];
            if !p.is_zero() {
                return Err(bad(a, b, p));
            }
        }
    }
    let skew = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| structure[i][j][k] == -&structure[j][i][k])))
        && left == right;
    Algebroid::from_parts(space.base_names.clone(), structure, left, right, skew, space.bundle.dual())
}

pub fn from_linear_bivector(t: &SpaceMultivector) -> Result<Algebroid> {
    from_linear_tensor(&t.to_tensor2()?)
}

/// Replace `e_i` by the fiber direction `d/dy^i`.
pub fn vertical_lift(a: &Algebroid, u: &FiberMultivector) -> SpaceMultivector {
    let space = TotalSpace::carrier_of(a);
    SpaceMultivector::from_field(&space, u.shifted(space.dim(), space.base_dim()))
}

/// Replace `e*^i` by `d/dxi_i` on the dual of the carrier.
pub fn vertical_lift_form(a: &Algebroid, mu: &FiberForm) -> SpaceMultivector {
    let space = TotalSpace::linear_tensor_of(a);
    SpaceMultivector::from_field(&space, mu.shifted(space.dim(), space.base_dim()))
}

/// `d_T f = df/dx^a d^a_j y^j`.
fn lift_function(a: &Algebroid, space: &TotalSpace, f: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero();
    for j in 0..a.rank() {
        let aj = a.anchor_basis(AnchorSide::Left, j, f);
        if !aj.is_zero() {
            acc += aj * Polynomial::var(space.fiber_var(j));
        }
    }
    acc
}

/// `d_T(X^i e_i) = X^i d^a_i d_x^a + (X^i c^k_ji + dX^k/dx^a d^a_j) y^j d_y^k`.
fn lift_section(a: &Algebroid, space: &TotalSpace, x: &Section) -> Alternating<SpaceFrame> {
    let (m, n) = (a.base_dim(), a.rank());
    let mut comps = vec![Polynomial::zero(); space.dim()];
    for (i, xi) in x.0.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for b in 0..m {
            let d = a.anchor(AnchorSide::Left, i, b);
            if !d.is_zero() {
                comps[b] += xi * d;
            }
        }
    }
    for k in 0..n {
        let mut acc = Polynomial::zero();
        for j in 0..n {
            let mut coeff = a.anchor_basis(AnchorSide::Left, j, &x.0[k]);
            for (i, xi) in x.0.iter().enumerate() {
                let c = a.structure(j, i, k);
                if !c.is_zero() && !xi.is_zero() {
                    coeff += xi * c;
                }
            }
            if !coeff.is_zero() {
                acc += coeff * Polynomial::var(space.fiber_var(j));
            }
        }
        comps[m + k] = acc;
    }
    Alternating::from_vector(&comps)
}

/// Complete lift, extended from functions and sections by
/// `d_T(u ^ v) = d_T u ^ v(v) + v(u) ^ d_T v`.
pub fn complete_lift(a: &Algebroid, u: &FiberMultivector) -> Result<SpaceMultivector> {
    a.require_skew()?;
    if u.dim() != a.rank() {
        return Err(Error::Shape(format!("multivector over rank {} for rank {}", u.dim(), a.rank())));
    }
    let space = TotalSpace::carrier_of(a);
    let dim = space.dim();
    let m = space.base_dim();
    let basis_lifts: Vec<Alternating<SpaceFrame>> =
        (0..a.rank()).map(|i| lift_section(a, &space, &Section::basis(a.rank(), i))).collect();
    let vert = |i: usize| Alternating::<SpaceFrame>::basis(dim, &[m + i]);
    let mut out = Alternating::zero(dim, u.degree());
    for (idx, f) in u.terms() {
        let idx: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        let words: Vec<Alternating<SpaceFrame>> = idx.iter().map(|&i| vert(i)).collect();
        let fixed = |parts: &[Alternating<SpaceFrame>]| {
            parts.iter().fold(Alternating::scalar(dim, Polynomial::one()), |acc, p| acc.wedge(p))
        };
        let df = lift_function(a, &space, f);
        if !df.is_zero() && !idx.is_empty() {
            out += fixed(&words).scale(&df);
        } else if idx.is_empty() {
            out += Alternating::scalar(dim, df);
            continue;
        }
        for r in 0..idx.len() {
            let mut parts = words.clone();
            parts[r] = basis_lifts[idx[r]].clone();
            out += fixed(&parts).scale(f);
        }
    }
    Ok(SpaceMultivector::from_field(&space, out))
}

fn right_derivative(idx: &[u16], r: usize) -> (Indices, bool) {
    let mut rest = idx.to_vec();
    rest.remove(r);
    (rest, (idx.len() - 1 - r) % 2 == 1)
}

fn left_derivative(idx: &[u16], r: usize) -> (Indices, bool) {
    let mut rest = idx.to_vec();
    rest.remove(r);
    (rest, r % 2 == 1)
}

/// Schouten bracket of multivector fields on a coordinate space,
/// `[P, Q] = sum_A (P d<theta_A) ^ (d_A Q) - (d_A P) ^ (d>theta_A Q)` in
/// super-function notation.
pub fn space_schouten(u: &SpaceMultivector, v: &SpaceMultivector) -> Result<SpaceMultivector> {
    u.space.require_same(&v.space)?;
    if u.degree() + v.degree() == 0 {
        return Err(Error::Degree("bracket of two functions".into()));
    }
    let space = &u.space;
    let dim = space.dim();
    let mut out = Alternating::<SpaceFrame>::zero(dim, u.degree() + v.degree() - 1);
    for (i, f) in u.field.terms() {
        for (j, g) in v.field.terms() {
            for r in 0..i.len() {
                let dg = g.partial(space.coordinate(i[r] as usize));
                if dg.is_zero() {
                    continue;
                }
                let (mut rest, odd) = right_derivative(i, r);
                rest.extend_from_slice(j);
                let c = f * &dg;
                out.add_unsorted(rest, if odd { -c } else { c });
            }
            for r in 0..j.len() {
                let df = f.partial(space.coordinate(j[r] as usize));
                if df.is_zero() {
                    continue;
                }
                let (rest, odd) = left_derivative(j, r);
                let mut idx = i.clone();
                idx.extend_from_slice(&rest);
                let c = &df * g;
                out.add_unsorted(idx, if odd { c } else { -c });
            }
        }
    }
    Ok(SpaceMultivector::from_field(space, out))
}

/// `L_X T = [X, T]` for a vector field `X`.
pub fn space_lie_derivative(x: &SpaceMultivector, t: &SpaceMultivector) -> Result<SpaceMultivector> {
    if x.degree() != 1 {
        return Err(Error::Degree("Lie derivative along a non-vector field".into()));
    }
    space_schouten(x, t)
}

/// `G(X) = -[Lambda, iota X]`.
pub fn hamiltonian_lift(a: &Algebroid, x: &Section) -> Result<SpaceMultivector> {
    let lambda = to_linear_bivector(a)?;
    let f = SpaceMultivector::function(lambda.space(), iota_dual(a, x));
    Ok(space_schouten(&lambda, &f)?.neg())
}

/// `J(N)`: `-N^i_j y^j d/dy^i` on the carrier, `-N^i_j xi_i d/dxi_j` on its
/// dual.
pub fn j_field(a: &Algebroid, n: &EndoTensor, bundle: Bundle) -> Result<SpaceMultivector> {
    if n.rank() != a.rank() || !n.is_square() {
        return Err(Error::Shape(format!("endomorphism must be {0}x{0}", a.rank())));
    }
    let space = TotalSpace::new(bundle, a.base_names().to_vec(), a.rank());
    let m = space.base_dim();
    let r = a.rank();
    let mut comps = vec![Polynomial::zero(); space.dim()];
    for i in 0..r {
        for j in 0..r {
            let c = n.entry(i, j);
            if c.is_zero() {
                continue;
            }
            if bundle == a.carrier() {
                comps[m + i] -= c * &Polynomial::var(space.fiber_var(j));
            } else {
                comps[m + j] -= c * &Polynomial::var(space.fiber_var(i));
            }
        }
    }
    Ok(SpaceMultivector::vector_field(&space, &comps))
}

/// `Lambda_N = L_{J(N)} Lambda`.
pub fn lambda_n_lie(a: &Algebroid, n: &EndoTensor) -> Result<SpaceMultivector> {
    let lambda = to_linear_bivector(a)?;
    let j = j_field(a, n, a.carrier().dual())?;
    space_lie_derivative(&j, &lambda)
}

/// `Lambda_N` from its components:
/// `(c^k_lj N^l_i + c^k_il N^l_j - c^l_ij N^k_l + d^a_i dN^k_j/dx^a
///  - s^a_j dN^k_i/dx^a) xi_k d_xi_i (x) d_xi_j + N^l_i d^a_l d_xi_i (x) d_x^a
///  - N^l_i s^a_l d_x^a (x) d_xi_i`.
pub fn lambda_n_tensor(a: &Algebroid, n: &EndoTensor) -> Result<SpaceTensor2> {
    if n.rank() != a.rank() || !n.is_square() {
        return Err(Error::Shape(format!("endomorphism must be {0}x{0}", a.rank())));
    }
    let space = TotalSpace::linear_tensor_of(a);
    let (m, r) = (a.base_dim(), a.rank());
    let mut t = SpaceTensor2::zero(&space);
    let ds = |side, i, f: &Polynomial| a.anchor_basis(side, i, f);
    for i in 0..r {
        for j in 0..r {
            let mut acc = Polynomial::zero();
            for k in 0..r {
                let mut c = ds(AnchorSide::Left, i, n.entry(k, j)) - ds(AnchorSide::Right, j, n.entry(k, i));
                for l in 0..r {
                    c += a.structure(l, j, k) * n.entry(l, i);
                    c += a.structure(i, l, k) * n.entry(l, j);
                    c -= a.structure(i, j, l) * n.entry(k, l);
                }
                if !c.is_zero() {
                    acc += c * Polynomial::var(space.fiber_var(k));
                }
            }
            t.comps[m + i][m + j] = acc;
        }
        for b in 0..m {
            let mut left = Polynomial::zero();
            let mut right = Polynomial::zero();
            for l in 0..r {
                left += n.entry(l, i) * a.anchor(AnchorSide::Left, l, b);
                right += n.entry(l, i) * a.anchor(AnchorSide::Right, l, b);
            }
            t.comps[m + i][b] = left;
            t.comps[b][m + i] = -right;
        }
    }
    Ok(t)
}

pub fn lambda_n_local(a: &Algebroid, n: &EndoTensor) -> Result<SpaceMultivector> {
    a.require_skew()?;
    lambda_n_tensor(a, n)?.to_bivector()
}

/// The algebroid encoded by `Lambda_N`.
pub fn deformed_algebroid(a: &Algebroid, n: &EndoTensor) -> Result<Algebroid> {
    from_linear_bivector(&lambda_n_local(a, n)?)
}

/// Complete lift for the deformed structure, using the rebuilt algebroid.
pub fn complete_lift_deformed_rebuilt(a: &Algebroid, n: &EndoTensor, u: &FiberMultivector) -> Result<SpaceMultivector> {
    complete_lift(&deformed_algebroid(a, n)?, u)
}

/// `d_T(i_N u) - L_{J_E(N)} d_T u`.
pub fn complete_lift_deformed_formula(a: &Algebroid, n: &EndoTensor, u: &FiberMultivector) -> Result<SpaceMultivector> {
    let lifted = complete_lift(a, &calculus::apply_in_multivector(n, u))?;
    let j = j_field(a, n, a.carrier())?;
    let lie = space_lie_derivative(&j, &complete_lift(a, u)?)?;
    lifted.sub(&lie)
}

/// Bracket of 1-forms `L_{P_mu} nu - L_{P_nu} mu - d P(mu, nu)`.
pub fn lifted_form_bracket(a: &Algebroid, p: &FiberMultivector, mu: &FiberForm, nu: &FiberForm) -> Result<FiberForm> {
    if p.degree() != 2 {
        return Err(Error::Degree(format!("expected a bivector, got degree {}", p.degree())));
    }
    let p_mu = Section::from_multivector(&calculus::interior_form(mu, p)?);
    let p_nu = Section::from_multivector(&calculus::interior_form(nu, p)?);
    let pmn = calculus::pair(p, &[mu.clone(), nu.clone()])?;
    let d = calculus::exterior_derivative(a, &FiberForm::scalar(a.rank(), pmn))?;
    Ok(calculus::lie_derivative_form(a, &p_mu, nu)? - calculus::lie_derivative_form(a, &p_nu, mu)? - d)
}

/// The algebroid on the dual bundle encoded by `d_T P`.
pub fn lifted_algebroid(a: &Algebroid, p: &FiberMultivector) -> Result<Algebroid> {
    from_linear_bivector(&complete_lift(a, p)?)
}

/// Same bracket read off the structure encoded by `d_T P`.
pub fn lifted_form_bracket_via_lift(
    a: &Algebroid,
    p: &FiberMultivector,
    mu: &FiberForm,
    nu: &FiberForm,
) -> Result<FiberForm> {
    let dual = lifted_algebroid(a, p)?;
    let s = dual.bracket_sections(&Section::from_form(mu), &Section::from_form(nu))?;
    Ok(s.to_form())
}

/// Vector bundle map over the identity, `z'^i = M^i_j z^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberLinearMap {
    source: TotalSpace,
    target: TotalSpace,
    matrix: Vec<Vec<Polynomial>>,
}

impl FiberLinearMap {
    pub fn new(source: TotalSpace, target: TotalSpace, matrix: Vec<Vec<Polynomial>>) -> Result<Self> {
        if !source.same_shape(&target) {
            return Err(Error::SpaceMismatch("base coordinates differ".into()));
        }
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Shape(format!("matrix must be {}x{}", target.rank(), source.rank())));
        }
        let base = VarSpace::base(source.base_names.clone());
        for c in matrix.iter().flatten() {
            if c.mentions_kind(VarKind::Fiber) || c.mentions_kind(VarKind::DualFiber) {
                return Err(Error::FiberVariable(c.to_string()));
            }
            base.check(c)?;
        }
        Ok(FiberLinearMap { source, target, matrix })
    }

    pub fn identity(space: &TotalSpace) -> Self {
        let n = space.rank();
        let m = EndoTensor::identity(n).0;
        FiberLinearMap { source: space.clone(), target: space.clone(), matrix: m }
    }

    pub fn source(&self) -> &TotalSpace {
        &self.source
    }

    pub fn target(&self) -> &TotalSpace {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Polynomial>] {
        &self.matrix
    }

    /// `-P~ : E* -> E`, `mu -> -P(mu, .)`.
    pub fn minus_p_tilde(a: &Algebroid, p: &FiberMultivector) -> Result<Self> {
        if p.degree() != 2 || p.dim() != a.rank() {
            return Err(Error::Degree("expected a bivector of matching rank".into()));
        }
        let n = a.rank();
        let matrix = (0..n).map(|j| (0..n).map(|i| p.component(&[j, i])).collect()).collect();
        Self::new(TotalSpace::linear_tensor_of(a), TotalSpace::carrier_of(a), matrix)
    }

    /// `N~ : E -> E`.
    pub fn n_tilde(a: &Algebroid, n: &EndoTensor) -> Result<Self> {
        let s = TotalSpace::carrier_of(a);
        Self::new(s.clone(), s, n.0.clone())
    }

    /// `N~* : E* -> E*`.
    pub fn n_star_tilde(a: &Algebroid, n: &EndoTensor) -> Result<Self> {
        let s = TotalSpace::linear_tensor_of(a);
        Self::new(s.clone(), s, n.transpose().0)
    }

    /// Target fiber coordinates written in source coordinates.
    fn bindings(&self) -> BTreeMap<Variable, Polynomial> {
        let mut out = BTreeMap::new();
        for i in 0..self.target.rank() {
            let mut acc = Polynomial::zero();
            for (j, c) in self.matrix[i].iter().enumerate() {
                if !c.is_zero() {
                    acc += c * &Polynomial::var(self.source.fiber_var(j));
                }
            }
            out.insert(self.target.fiber_var(i), acc);
        }
        out
    }

    /// Image of the source direction `d` as a target vector with
    /// coefficients in source coordinates.
    fn differential(&self, d: usize) -> Vec<Polynomial> {
        let m = self.source.base_dim();
        let mut out = vec![Polynomial::zero(); self.target.dim()];
        if d < m {
            out[d] = Polynomial::one();
            for i in 0..self.target.rank() {
                let mut acc = Polynomial::zero();
                for (j, c) in self.matrix[i].iter().enumerate() {
                    let dc = c.partial(Variable::base(d));
                    if !dc.is_zero() {
                        acc += dc * Polynomial::var(self.source.fiber_var(j));
                    }
                }
                out[m + i] = acc;
            }
        } else {
            for i in 0..self.target.rank() {
                out[m + i] = self.matrix[i][d - m].clone();
            }
        }
        out
    }

    /// `dPhi` applied to a multivector field, coefficients in source
    /// coordinates.
    pub fn pushforward(&self, t: &SpaceMultivector) -> Result<SpaceMultivector> {
        self.source.require_same(&t.space)?;
        let images: Vec<Alternating<SpaceFrame>> =
            (0..self.source.dim()).map(|d| Alternating::from_vector(&self.differential(d))).collect();
        let dim = self.target.dim();
        let mut out = Alternating::zero(dim, t.degree());
        for (idx, c) in t.field.terms() {
            let mut acc = Alternating::scalar(dim, c.clone());
            for &d in idx {
                acc = acc.wedge(&images[d as usize]);
            }
            out += acc;
        }
        Ok(SpaceMultivector::from_field(&self.target, out))
    }

    /// Target field composed with the map.
    pub fn pullback_coefficients(&self, t: &SpaceMultivector) -> Result<SpaceMultivector> {
        self.target.require_same(&t.space)?;
        Ok(t.substitute(&self.bindings()))
    }
}

/// Outcome of a relatedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relatedness {
    pub related: bool,
    /// First differing component: directions and `pushforward - target`.
    pub witness: Option<(Indices, Polynomial)>,
}

/// Whether `dPhi(T1) = T2 o Phi`.
pub fn are_related(phi: &FiberLinearMap, t1: &SpaceMultivector, t2: &SpaceMultivector) -> Result<Relatedness> {
    if t1.degree() != t2.degree() {
        return Err(Error::Degree(format!("degrees {} and {}", t1.degree(), t2.degree())));
    }
    let lhs = phi.pushforward(t1)?;
    let rhs = phi.pullback_coefficients(t2)?;
    let diff = lhs.sub(&rhs)?;
    let witness = diff.terms().next().map(|(i, c)| (i.clone(), c.clone()));
    Ok(Relatedness { related: witness.is_none(), witness })
}

/// Relatedness of general 2-tensors: `J T1 J^T = T2 o Phi`.
pub fn are_related_tensor2(phi: &FiberLinearMap, t1: &SpaceTensor2, t2: &SpaceTensor2) -> Result<Relatedness> {
    phi.source.require_same(&t1.space)?;
    phi.target.require_same(&t2.space)?;
    let (ds, dt) = (phi.source.dim(), phi.target.dim());
    let jac: Vec<Vec<Polynomial>> = (0..ds).map(|d| phi.differential(d)).collect();
    let rhs = t2.substitute(&phi.bindings());
    for p in 0..dt {
        for q in 0..dt {
            let mut acc = Polynomial::zero();
            for a in 0..ds {
                if jac[a][p].is_zero() {
                    continue;
                }
                for b in 0..ds {
                    let c = &t1.comps[a][b];
                    if !c.is_zero() && !jac[b][q].is_zero() {
                        acc += &jac[a][p] * c * &jac[b][q];
                    }
                }
            }
            let diff = acc - &rhs.comps[p][q];
            if !diff.is_zero() {
                return Ok(Relatedness { related: false, witness: Some((vec![p as u16, q as u16], diff)) });
            }
        }
    }
    Ok(Relatedness { related: true, witness: None })
}

/// `second o first`.
pub fn compose(first: &FiberLinearMap, second: &FiberLinearMap) -> Result<FiberLinearMap> {
    first.target.require_same(&second.source)?;
    let (nt, nm, ns) = (second.target.rank(), first.target.rank(), first.source.rank());
    let matrix = (0..nt)
        .map(|i| {
            (0..ns)
                .map(|j| {
                    let mut acc = Polynomial::zero();
                    for k in 0..nm {
                        acc += &second.matrix[i][k] * &first.matrix[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    FiberLinearMap::new(first.source.clone(), second.target.clone(), matrix)
}
