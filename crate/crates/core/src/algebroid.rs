//! Pseudo-, pre- and Lie algebroids given by structure functions.
//!
//! In a local frame `e_1..e_n` of `E` over base coordinates `x^1..x^m` the
//! structure is `[e_i, e_j] = c^k_ij e_k` together with a left anchor
//! `d^a_i` and a right anchor `s^a_i`. On arbitrary sections the bracket is
//! extended by
//!
//! ```text
//! [fX, gY] = f a_l(X)(g) Y - g a_r(Y)(f) X + fg [X, Y]
//! ```
//!
//! All indices are zero-based in the API; printed names are one-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::Alternating;
use crate::poly::{Polynomial, VarKind, VarSpace, Variable};

/// Frame marker for sections of the algebroid bundle.
#[derive(Debug)]
pub enum VectorFrame {}

/// Frame marker for sections of the dual bundle.
#[derive(Debug)]
pub enum CovectorFrame {}

/// Section of `wedge^k E`.
pub type FiberMultivector = Alternating<VectorFrame>;

/// Section of `wedge^k E*`.
pub type FiberForm = Alternating<CovectorFrame>;

/// Which vector bundle a structure or a total space refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bundle {
    E,
    EDual,
}

impl Bundle {
    pub fn dual(self) -> Bundle {
        match self {
            Bundle::E => Bundle::EDual,
            Bundle::EDual => Bundle::E,
        }
    }

    /// Linear fiber coordinate `y^i` on `E` or `xi_i` on `E*`.
    pub fn fiber_var(self, i: usize) -> Variable {
        match self {
            Bundle::E => Variable::fiber(i),
            Bundle::EDual => Variable::dual_fiber(i),
        }
    }

    pub fn fiber_kind(self) -> VarKind {
        match self {
            Bundle::E => VarKind::Fiber,
            Bundle::EDual => VarKind::DualFiber,
        }
    }
}

/// Section `X = X^i e_i` with base-polynomial components.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Section(pub Vec<Polynomial>);

impl Section {
    pub fn zero(rank: usize) -> Self {
        Section(vec![Polynomial::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut s = Self::zero(rank);
        s.0[i] = Polynomial::one();
        s
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, f: &Polynomial) -> Section {
        Section(self.0.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Section {
        Section(self.0.iter().map(|c| -c).collect())
    }

    pub fn to_multivector(&self) -> FiberMultivector {
        Alternating::from_vector(&self.0)
    }

    pub fn to_form(&self) -> FiberForm {
        Alternating::from_vector(&self.0)
    }

    pub fn from_multivector(u: &FiberMultivector) -> Section {
        Section(u.to_vector())
    }

    pub fn from_form(u: &FiberForm) -> Section {
        Section(u.to_vector())
    }

    pub fn render(&self, names: &VarSpace, token: &str) -> String {
        let idx: Vec<Vec<u16>> = (0..self.rank()).map(|i| vec![i as u16]).collect();
        crate::exterior::render_terms(
            idx.iter().zip(&self.0).filter(|(_, c)| !c.is_zero()),
            |i| format!("{token}{}", i + 1),
            |c| c.display(names).to_string(),
        )
    }
}

/// `N = N^i_j e_i (x) e*^j`, stored row `i`, column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoTensor(pub Vec<Vec<Polynomial>>);

impl EndoTensor {
    pub fn zero(n: usize) -> Self {
        EndoTensor(vec![vec![Polynomial::zero(); n]; n])
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zero(n);
        for i in 0..n {
            t.0[i][i] = Polynomial::one();
        }
        t
    }

    pub fn diagonal(entries: &[Polynomial]) -> Self {
        let mut t = Self::zero(entries.len());
        for (i, e) in entries.iter().enumerate() {
            t.0[i][i] = e.clone();
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.0[i][j]
    }

    pub fn is_square(&self) -> bool {
        self.0.iter().all(|row| row.len() == self.0.len())
    }

    /// `N X`.
    pub fn apply(&self, x: &Section) -> Section {
        let n = self.rank();
        Section(
            (0..n)
                .map(|i| {
                    let mut acc = Polynomial::zero();
                    for j in 0..n {
                        acc += &self.0[i][j] * &x.0[j];
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `N^T mu`.
    pub fn apply_transpose(&self, mu: &Section) -> Section {
        self.transpose().apply(mu)
    }

    pub fn transpose(&self) -> EndoTensor {
        let n = self.rank();
        EndoTensor((0..n).map(|i| (0..n).map(|j| self.0[j][i].clone()).collect()).collect())
    }

    pub fn matmul(&self, other: &EndoTensor) -> EndoTensor {
        let n = self.rank();
        EndoTensor(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = Polynomial::zero();
                            for k in 0..n {
                                acc += &self.0[i][k] * &other.0[k][j];
                            }
                            acc
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn scale(&self, f: &Polynomial) -> EndoTensor {
        EndoTensor(self.0.iter().map(|row| row.iter().map(|c| c * f).collect()).collect())
    }

    pub fn add(&self, other: &EndoTensor) -> EndoTensor {
        EndoTensor(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    /// Column `j`, i.e. `N e_j`.
    pub fn column(&self, j: usize) -> Section {
        Section(self.0.iter().map(|row| row[j].clone()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorSide {
    Left,
    Right,
}

/// Structure functions of a pseudo-Lie algebroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebroid {
    base_names: Vec<String>,
    rank: usize,
    /// `structure[i][j][k] = c^k_ij`.
    structure: Vec<Vec<Vec<Polynomial>>>,
    /// `anchor_left[i][a] = d^a_i`.
    anchor_left: Vec<Vec<Polynomial>>,
    anchor_right: Vec<Vec<Polynomial>>,
    skew: bool,
    carrier: Bundle,
}

impl Algebroid {
    /// Zero structure on a bundle of the given rank.
    pub fn new(base_names: Vec<String>, rank: usize, skew: bool) -> Self {
        let m = base_names.len();
        Algebroid {
            base_names,
            rank,
            structure: vec![vec![vec![Polynomial::zero(); rank]; rank]; rank],
            anchor_left: vec![vec![Polynomial::zero(); m]; rank],
            anchor_right: vec![vec![Polynomial::zero(); m]; rank],
            skew,
            carrier: Bundle::E,
        }
    }

    /// Build from raw arrays; shapes are checked.
    pub fn from_parts(
        base_names: Vec<String>,
        structure: Vec<Vec<Vec<Polynomial>>>,
        anchor_left: Vec<Vec<Polynomial>>,
        anchor_right: Vec<Vec<Polynomial>>,
        skew: bool,
        carrier: Bundle,
    ) -> Result<Self> {
        let n = structure.len();
        let m = base_names.len();
        if structure.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(Error::Shape(format!("structure functions must be {n}x{n}x{n}")));
        }
        for (label, anchor) in [("left", &anchor_left), ("right", &anchor_right)] {
            if anchor.len() != n || anchor.iter().any(|r| r.len() != m) {
                return Err(Error::Shape(format!("{label} anchor must be {n}x{m}")));
            }
        }
        let a = Algebroid { base_names, rank: n, structure, anchor_left, anchor_right, skew, carrier };
        a.check_base_only()?;
        Ok(a)
    }

    fn check_base_only(&self) -> Result<()> {
        let space = self.base_space();
        let all = self
            .structure
            .iter()
            .flatten()
            .flatten()
            .chain(self.anchor_left.iter().flatten())
            .chain(self.anchor_right.iter().flatten());
        for p in all {
            space.check(p)?;
        }
        Ok(())
    }

    pub fn with_carrier(mut self, carrier: Bundle) -> Self {
        self.carrier = carrier;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_dim(&self) -> usize {
        self.base_names.len()
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn carrier(&self) -> Bundle {
        self.carrier
    }

    /// Names for printing base polynomials.
    pub fn base_space(&self) -> VarSpace {
        VarSpace::base(self.base_names.clone())
    }

    /// Names for base, `y` and `xi` coordinates.
    pub fn total_space_names(&self) -> VarSpace {
        VarSpace::total(self.base_names.clone(), self.rank)
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Polynomial {
        &self.structure[i][j][k]
    }

    pub fn anchor(&self, side: AnchorSide, i: usize, a: usize) -> &Polynomial {
        match side {
            AnchorSide::Left => &self.anchor_left[i][a],
            AnchorSide::Right => &self.anchor_right[i][a],
        }
    }

    fn check_index(&self, what: &str, i: usize, bound: usize) -> Result<()> {
        if i >= bound {
            return Err(Error::Index(format!("{what} index {} exceeds {bound}", i + 1)));
        }
        Ok(())
    }

    fn check_coefficient(&self, p: &Polynomial) -> Result<()> {
        if p.mentions_kind(VarKind::Fiber) || p.mentions_kind(VarKind::DualFiber) {
            return Err(Error::FiberVariable(p.to_string()));
        }
        self.base_space().check(p)?;
        Ok(())
    }

    /// Set the single entry `c^k_ij` without touching `c^k_ji`.
    pub fn set_structure(&mut self, i: usize, j: usize, k: usize, p: Polynomial) -> Result<()> {
        for idx in [i, j, k] {
            self.check_index("frame", idx, self.rank)?;
        }
        self.check_coefficient(&p)?;
        self.structure[i][j][k] = p;
        Ok(())
    }

    /// Set `c^k_ij = p` and `c^k_ji = -p`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, p: Polynomial) -> Result<()> {
        self.set_structure(j, i, k, -&p)?;
        self.set_structure(i, j, k, p)
    }

    pub fn set_anchor_side(&mut self, side: AnchorSide, i: usize, a: usize, p: Polynomial) -> Result<()> {
        self.check_index("frame", i, self.rank)?;
        self.check_index("base", a, self.base_dim())?;
        self.check_coefficient(&p)?;
        match side {
            AnchorSide::Left => self.anchor_left[i][a] = p,
            AnchorSide::Right => self.anchor_right[i][a] = p,
        }
        Ok(())
    }

    /// Set both anchors at once.
    pub fn set_anchor(&mut self, i: usize, a: usize, p: Polynomial) -> Result<()> {
        self.set_anchor_side(AnchorSide::Left, i, a, p.clone())?;
        self.set_anchor_side(AnchorSide::Right, i, a, p)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n = self.rank;
        let antisymmetric = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.structure[i][j][k] == -&self.structure[j][i][k]))
        });
        let anchors_equal = self.anchor_left == self.anchor_right;
        if self.skew {
            'outer: for i in 0..n {
                for j in i..n {
                    for k in 0..n {
                        if self.structure[i][j][k] != -&self.structure[j][i][k] {
                            issues.push(format!(
                                "skew structure has c^{k1}_{i1}{j1} = {} but c^{k1}_{j1}{i1} = {}",
                                self.structure[i][j][k].display(&self.base_space()),
                                self.structure[j][i][k].display(&self.base_space()),
                                k1 = k + 1,
                                i1 = i + 1,
                                j1 = j + 1,
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            if !anchors_equal {
                issues.push("skew structure has distinct left and right anchors".to_string());
            }
        }
        ValidationReport {
            skew_consistent: issues.is_empty(),
            is_pre_lie: antisymmetric && anchors_equal,
            issues,
        }
    }

    fn require_rank(&self, x: &Section) -> Result<()> {
        if x.rank() != self.rank {
            return Err(Error::Shape(format!("section of rank {} for rank {}", x.rank(), self.rank)));
        }
        Ok(())
    }

    pub(crate) fn require_skew(&self) -> Result<()> {
        if !self.skew || !self.validate().skew_consistent {
            return Err(Error::NotSkew);
        }
        Ok(())
    }

    /// `a(e_i)(f) = anchor^a_i df/dx^a`.
    pub fn anchor_basis(&self, side: AnchorSide, i: usize, f: &Polynomial) -> Polynomial {
        let row = match side {
            AnchorSide::Left => &self.anchor_left[i],
            AnchorSide::Right => &self.anchor_right[i],
        };
        let mut acc = Polynomial::zero();
        for (a, d) in row.iter().enumerate() {
            if !d.is_zero() {
                acc += d * &f.partial(Variable::base(a));
            }
        }
        acc
    }

    /// `a(X)(f) = X^i anchor^a_i df/dx^a`.
    pub fn anchor_apply(&self, x: &Section, f: &Polynomial, side: AnchorSide) -> Result<Polynomial> {
        self.require_rank(x)?;
        self.check_coefficient(f)?;
        Ok(self.anchor_unchecked(x, f, side))
    }

    pub(crate) fn anchor_unchecked(&self, x: &Section, f: &Polynomial, side: AnchorSide) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if !xi.is_zero() {
                acc += xi * &self.anchor_basis(side, i, f);
            }
        }
        acc
    }

    /// `[e_i, e_j]` as a section.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Section {
        Section(self.structure[i][j].clone())
    }

    pub fn bracket_sections(&self, x: &Section, y: &Section) -> Result<Section> {
        self.require_rank(x)?;
        self.require_rank(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Section, y: &Section) -> Section {
        let n = self.rank;
        let mut out = Section::zero(n);
        for i in 0..n {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.0[j].is_zero() {
                    continue;
                }
                let xy = &x.0[i] * &y.0[j];
                for k in 0..n {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        out.0[k] += &xy * c;
                    }
                }
            }
        }
        for k in 0..n {
            out.0[k] += self.anchor_unchecked(x, &y.0[k], AnchorSide::Left);
            out.0[k] -= &self.anchor_unchecked(y, &x.0[k], AnchorSide::Right);
        }
        out
    }

    /// `[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]`.
    pub fn jacobiator(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        self.require_skew()?;
        for s in [x, y, z] {
            self.require_rank(s)?;
        }
        let b = |u: &Section, v: &Section| self.bracket_unchecked(u, v);
        Ok(b(&b(x, y), z).add(&b(&b(y, z), x)).add(&b(&b(z, x), y)))
    }

    /// Jacobi on all basis triples plus anchor compatibility
    /// `a([e_i,e_j]) = [a(e_i), a(e_j)]` on all basis pairs.
    pub fn is_lie(&self) -> LieReport {
        if self.require_skew().is_err() {
            return LieReport { lie: false, witness: Some(LieWitness::NotSkew) };
        }
        let n = self.rank;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let b = |a| Section::basis(n, a);
                    let jac = self.jacobiator(&b(i), &b(j), &b(k)).expect("skew checked");
                    if !jac.is_zero() {
                        return LieReport {
                            lie: false,
                            witness: Some(LieWitness::Jacobi { triple: [i, j, k], value: jac }),
                        };
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for a in 0..self.base_dim() {
                    let xa = Polynomial::var(Variable::base(a));
                    let lhs = self.anchor_unchecked(&self.bracket_basis(i, j), &xa, AnchorSide::Left);
                    let aj = self.anchor_basis(AnchorSide::Left, j, &xa);
                    let ai = self.anchor_basis(AnchorSide::Left, i, &xa);
                    let rhs = &self.anchor_basis(AnchorSide::Left, i, &aj)
                        - &self.anchor_basis(AnchorSide::Left, j, &ai);
                    if lhs != rhs {
                        return LieReport {
                            lie: false,
                            witness: Some(LieWitness::Anchor { pair: [i, j], coordinate: a, defect: &lhs - &rhs }),
                        };
                    }
                }
            }
        }
        LieReport { lie: true, witness: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Skew flag agrees with the stored data (vacuous for non-skew structures).
    pub skew_consistent: bool,
    pub is_pre_lie: bool,
    pub issues: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieWitness {
    NotSkew,
    Jacobi { triple: [usize; 3], value: Section },
    Anchor { pair: [usize; 2], coordinate: usize, defect: Polynomial },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieReport {
    pub lie: bool,
    pub witness: Option<LieWitness>,
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bundle::E => "E",
            Bundle::EDual => "E*",
        })
    }
}

/// Render a fiber multivector with `e1^e2` tokens.
pub fn render_multivector(u: &FiberMultivector, names: &VarSpace) -> String {
    crate::exterior::render_terms(u.terms(), |i| format!("e{}", i + 1), |c| c.display(names).to_string())
}

/// Render a fiber form with `e*1^e*2` tokens.
pub fn render_form(u: &FiberForm, names: &VarSpace) -> String {
    crate::exterior::render_terms(u.terms(), |i| format!("e*{}", i + 1), |c| c.display(names).to_string())
}
