//! Exact multivariate polynomials with rational coefficients.
//!
//! Variables come in three kinds: base coordinates `x`, fiber coordinates `y`
//! on `E` and fiber coordinates `xi` on `E*`. A [`Polynomial`] does not carry
//! its variable space; a [`VarSpace`] supplies names for parsing and printing
//! and validates which variables a polynomial may mention.
//!
//! Monomials are ordered graded-lexicographically with `x1 > x2 > ... > y1 >
//! ... > xi1 > ...`. Terms print in descending order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Build a rational from a small numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Base,
    Fiber,
    DualFiber,
}

/// A coordinate. Indices are zero-based; `x1` is `Variable::base(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub kind: VarKind,
    pub index: u16,
}

impl Variable {
    pub const fn base(index: usize) -> Self {
        Variable { kind: VarKind::Base, index: index as u16 }
    }

    pub const fn fiber(index: usize) -> Self {
        Variable { kind: VarKind::Fiber, index: index as u16 }
    }

    pub const fn dual_fiber(index: usize) -> Self {
        Variable { kind: VarKind::DualFiber, index: index as u16 }
    }

    pub fn idx(self) -> usize {
        self.index as usize
    }
}

/// Sparse exponent vector, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Variable, u32)>) -> Self {
        powers.retain(|&(_, e)| e > 0);
        powers.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(Variable, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lower the exponent of `v` by one. Returns the old exponent.
    fn lower(&self, v: Variable) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by_key(&v, |&(w, _)| w).ok()?;
        let e = self.0[pos].1;
        let mut powers = self.0.clone();
        if e == 1 {
            powers.remove(pos);
        } else {
            powers[pos].1 -= 1;
        }
        Some((e, Monomial(powers)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic with the smallest `Variable` most significant.
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in canonical form: no zero coefficients, unique monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Variable) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if this polynomial mentions no variable.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest degree in variables of the given kind over all terms.
    pub fn degree_in(&self, kind: VarKind) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0.iter().filter(|(v, _)| v.kind == kind).map(|&(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        let mut vs: Vec<Variable> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs.into_iter()
    }

    pub fn mentions_kind(&self, kind: VarKind) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(v, _)| v.kind == kind))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, v: Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Simultaneous substitution. Variables without a binding are kept.
    pub fn substitute(&self, bindings: &BTreeMap<Variable, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Polynomial::constant(c.clone());
            for &(v, e) in &m.0 {
                match bindings.get(&v) {
                    Some(val) => factor = &factor * &val.pow(e),
                    None => kept.push((v, e)),
                }
            }
            let kept = Polynomial::term(Rational::one(), Monomial(kept));
            out += &factor * &kept;
        }
        out
    }

    /// Write `self` as `sum_i coeff_i * v_i` over the given variables, where
    /// each coefficient is free of them. Fails if some term has total degree
    /// other than one in `vars`.
    pub fn linear_decomposition(&self, vars: &[Variable]) -> Option<Vec<Polynomial>> {
        let mut out = vec![Polynomial::zero(); vars.len()];
        for (m, c) in &self.terms {
            let mut hit = None;
            let mut count = 0;
            for (pos, v) in vars.iter().enumerate() {
                let e = m.exponent(*v);
                if e > 0 {
                    count += e;
                    hit = Some(pos);
                }
            }
            if count != 1 {
                return None;
            }
            let pos = hit?;
            let (_, rest) = m.lower(vars[pos])?;
            out[pos].add_term(rest, c.clone());
        }
        Some(out)
    }

    pub fn display<'a>(&'a self, names: &'a VarSpace) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Whether printing needs parentheses when used as a factor.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }

    /// Sign of the leading coefficient (the first printed term).
    pub fn leading_is_negative(&self) -> bool {
        self.terms.iter().next_back().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Self {
        Polynomial::var(v)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Mul<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        &self * rhs
    }
}

impl Mul<Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self * &rhs
    }
}

impl Add<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: &Polynomial) -> Polynomial {
        self += rhs;
        self
    }
}

impl Sub<&Polynomial> for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: &Polynomial) -> Polynomial {
        self -= rhs;
        self
    }
}

impl SubAssign for Polynomial {
    fn sub_assign(&mut self, rhs: Polynomial) {
        *self -= &rhs;
    }
}

/// Names for the coordinates a polynomial may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpace {
    base: Vec<String>,
    fiber_rank: usize,
    dual_rank: usize,
}

impl VarSpace {
    /// Base coordinates only.
    pub fn base(names: Vec<String>) -> Self {
        VarSpace { base: names, fiber_rank: 0, dual_rank: 0 }
    }

    /// Base coordinates plus `y1..yn` and `xi1..xin`.
    pub fn total(names: Vec<String>, rank: usize) -> Self {
        VarSpace { base: names, fiber_rank: rank, dual_rank: rank }
    }

    pub fn with_fiber(mut self, rank: usize) -> Self {
        self.fiber_rank = rank;
        self
    }

    pub fn with_dual_fiber(mut self, rank: usize) -> Self {
        self.dual_rank = rank;
        self
    }

    /// Default names `x1..xm`.
    pub fn standard(m: usize, rank: usize) -> Self {
        Self::total((1..=m).map(|a| format!("x{a}")).collect(), rank)
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, v: Variable) -> bool {
        let bound = match v.kind {
            VarKind::Base => self.base.len(),
            VarKind::Fiber => self.fiber_rank,
            VarKind::DualFiber => self.dual_rank,
        };
        v.idx() < bound
    }

    /// First variable of `p` outside this space, if any.
    pub fn check(&self, p: &Polynomial) -> Result<(), PolyError> {
        match p.variables().find(|v| !self.contains(*v)) {
            Some(v) => Err(PolyError::ForeignVariable(self.name(v))),
            None => Ok(()),
        }
    }

    pub fn name(&self, v: Variable) -> String {
        match v.kind {
            VarKind::Base => self
                .base
                .get(v.idx())
                .cloned()
                .unwrap_or_else(|| format!("x{}", v.idx() + 1)),
            VarKind::Fiber => format!("y{}", v.idx() + 1),
            VarKind::DualFiber => format!("xi{}", v.idx() + 1),
        }
    }

    pub fn lookup(&self, ident: &str) -> Option<Variable> {
        if let Some(a) = self.base.iter().position(|n| n == ident) {
            return Some(Variable::base(a));
        }
        let indexed = |prefix: &str, bound: usize| -> Option<usize> {
            let digits = ident.strip_prefix(prefix)?;
            if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let i: usize = digits.parse().ok()?;
            (i >= 1 && i <= bound).then_some(i - 1)
        };
        if let Some(i) = indexed("xi", self.dual_rank) {
            return Some(Variable::dual_fiber(i));
        }
        indexed("y", self.fiber_rank).map(Variable::fiber)
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial, PolyError> {
        parse_poly(src, self)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a VarSpace,
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &VarSpace) -> fmt::Result {
    for (k, &(v, e)) in m.0.iter().enumerate() {
        if k > 0 {
            f.write_str("*")?;
        }
        f.write_str(&names.name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// One term with its sign already stripped (`c > 0`).
fn write_unsigned_term(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    c: &Rational,
    names: &VarSpace,
) -> fmt::Result {
    if m.is_one() {
        return write_rational(f, c);
    }
    if !c.is_one() {
        write_rational(f, c)?;
        f.write_str("*")?;
    }
    write_monomial(f, m, names)
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_unsigned_term(f, m, &c.abs(), self.names)?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarSpace::standard(0, 0);
        fmt::Display::fmt(&self.display(&names), f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("variable `{0}` is not part of this coordinate space")]
    ForeignVariable(String),
}

/// Parse an expression over the identifiers declared in `space`.
///
/// ```text
/// expr     := term (('+' | '-') term)*
/// term     := factor ('*' factor)*
/// factor   := '-' factor | atom ('^' uint)?
/// atom     := rational | identifier | '(' expr ')'
/// rational := uint ('/' uint)?
/// ```
///
/// Whitespace between tokens is ignored.
pub fn parse_poly(src: &str, space: &VarSpace) -> Result<Polynomial, PolyError> {
    let mut parser = Parser { src: src.as_bytes(), pos: 0, space };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    space: &'a VarSpace,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.uint()?;
                if self.eat(b'/') {
                    self.skip_ws();
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    Ok(Polynomial::constant(BigRational::new(num, den)))
                } else {
                    Ok(Polynomial::constant(BigRational::from_integer(num)))
                }
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.space.lookup(ident) {
                    Some(v) => Ok(Polynomial::var(v)),
                    None => Err(PolyError::UnknownIdentifier { pos: start, name: ident.to_string() }),
                }
            }
            Some(_) => Err(self.error("expected a number, identifier or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(Variable::base(i))
    }

    fn space2() -> VarSpace {
        VarSpace::standard(2, 2)
    }

    #[test]
    fn additive_cancellation_and_identity() {
        let p = &x(0) + &Polynomial::one();
        assert_eq!(&p + &(-&x(0)), Polynomial::one());
        assert_eq!(&Polynomial::zero() + &p, p);
    }

    #[test]
    fn rational_coefficients_add() {
        let a = x(0).scale(&rat(1, 2));
        let b = x(0).scale(&rat(1, 3));
        assert_eq!(&a + &b, x(0).scale(&rat(5, 6)));
    }

    #[test]
    fn products() {
        assert_eq!(&x(0) * &x(0), x(0).pow(2));
        assert!((&x(0) * &Polynomial::zero()).is_zero());
        let lhs = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        assert_eq!(lhs, &x(0).pow(2) - &x(1).pow(2));
    }

    #[test]
    fn partial_derivatives() {
        let p = &x(0).pow(2) * &x(1);
        assert_eq!(p.partial(Variable::base(0)), (&x(0) * &x(1)).scale(&rat(2, 1)));
        assert!(Polynomial::int(7).partial(Variable::base(0)).is_zero());
        let y1 = Polynomial::var(Variable::fiber(0));
        assert_eq!((&y1 * &x(0)).partial(Variable::fiber(0)), x(0));
    }

    #[test]
    fn substitution() {
        let xi = |i| Polynomial::var(Variable::dual_fiber(i));
        let p = &xi(0) * &xi(2);
        let b = BTreeMap::from([(Variable::dual_fiber(0), -xi(0))]);
        assert_eq!(p.substitute(&b), -&p);

        let b = BTreeMap::from([
            (Variable::base(0), Polynomial::zero()),
            (Variable::base(1), Polynomial::zero()),
        ]);
        assert!((&x(0) + &x(1)).substitute(&b).is_zero());

        let y1 = Polynomial::var(Variable::fiber(0));
        let b = BTreeMap::from([(Variable::fiber(0), &x(0) + &Polynomial::one())]);
        let expect = space2().parse("x1^2 + 2*x1 + 1").unwrap();
        assert_eq!(y1.pow(2).substitute(&b), expect);
    }

    #[test]
    fn substitution_is_simultaneous() {
        let b = BTreeMap::from([(Variable::base(0), x(1)), (Variable::base(1), x(0))]);
        let p = &x(0).pow(2) + &x(1);
        assert_eq!(p.substitute(&b), &x(1).pow(2) + &x(0));
    }

    #[test]
    fn parse_examples() {
        let s = space2();
        let p = s.parse("2/3*x1^2 - x2").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&Monomial::from_powers(vec![(Variable::base(0), 2)])), rat(2, 3));
        assert_eq!(p.coefficient(&Monomial::var(Variable::base(1))), rat(-1, 1));
        assert_eq!(s.parse("(x1+1)^2").unwrap(), s.parse("x1^2 + 2*x1 + 1").unwrap());
        match s.parse("x9") {
            Err(PolyError::UnknownIdentifier { name, pos: 0 }) => assert_eq!(name, "x9"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let s = space2();
        assert!(matches!(s.parse("x1 +"), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(s.parse("(x1"), Err(PolyError::Syntax { .. })));
        assert!(matches!(s.parse("1/0"), Err(PolyError::Syntax { .. })));
        assert!(matches!(s.parse("x1 x2"), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(s.parse("y3"), Err(PolyError::UnknownIdentifier { .. })));
    }

    #[test]
    fn canonical_printing() {
        let s = space2();
        let p = s.parse("-x2 + 2/3*x1^2").unwrap();
        assert_eq!(p.display(&s).to_string(), "2/3*x1^2 - x2");
        assert_eq!(Polynomial::zero().display(&s).to_string(), "0");
        assert_eq!(Polynomial::one().display(&s).to_string(), "1");
        let q = s.parse("xi1*y2 - 1 + x1*y1").unwrap();
        assert_eq!(q.display(&s).to_string(), "x1*y1 + y2*xi1 - 1");
        assert_eq!(s.parse("-x1").unwrap().display(&s).to_string(), "-x1");
    }

    #[test]
    fn custom_base_names() {
        let s = VarSpace::base(vec!["q".into(), "p".into()]);
        let p = s.parse("q*p - p^2").unwrap();
        assert_eq!(p.display(&s).to_string(), "q*p - p^2");
        assert!(s.parse("y1").is_err());
    }

    #[test]
    fn linear_decomposition_reads_coefficients() {
        let s = space2();
        let p = s.parse("x1*xi1 + 3*xi2").unwrap();
        let vars = [Variable::dual_fiber(0), Variable::dual_fiber(1)];
        let parts = p.linear_decomposition(&vars).unwrap();
        assert_eq!(parts, vec![x(0), Polynomial::int(3)]);
        assert!(s.parse("xi1^2").unwrap().linear_decomposition(&vars).is_none());
        assert!(s.parse("x1").unwrap().linear_decomposition(&vars).is_none());
    }

    #[test]
    fn space_check_flags_foreign_variables() {
        let s = VarSpace::base(vec!["x1".into()]);
        assert!(s.check(&x(0)).is_ok());
        assert_eq!(s.check(&x(1)), Err(PolyError::ForeignVariable("x2".into())));
    }
}
