//! Skew tensors with polynomial coefficients over a fixed frame.
//!
//! An [`Alternating`] stores one polynomial per strictly increasing index
//! tuple. The marker type distinguishes what the frame is: sections of `E`,
//! of `E*`, or coordinate directions on a total space.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::poly::{Polynomial, Rational};

/// Index tuple, strictly increasing when stored.
pub type Indices = Vec<u16>;

/// Sort `idx` in place; returns the permutation sign, or `None` if an index
/// repeats.
pub fn sort_with_sign(idx: &mut [u16]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

pub struct Alternating<K> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Indices, Polynomial>,
    _kind: PhantomData<fn() -> K>,
}

impl<K> Clone for Alternating<K> {
    fn clone(&self) -> Self {
        Alternating {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.clone(),
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for Alternating<K> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.degree == other.degree && self.terms == other.terms
    }
}

impl<K> Eq for Alternating<K> {}

impl<K> fmt::Debug for Alternating<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alternating")
            .field("dim", &self.dim)
            .field("degree", &self.degree)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<K> Alternating<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Alternating { dim, degree, terms: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn scalar(dim: usize, f: Polynomial) -> Self {
        let mut out = Self::zero(dim, 0);
        out.add_component(Vec::new(), f);
        out
    }

    /// `f * e_{i1} ^ ... ^ e_{ik}` for indices in any order.
    pub fn monomial(dim: usize, indices: &[usize], f: Polynomial) -> Self {
        let mut out = Self::zero(dim, indices.len());
        let idx: Indices = indices.iter().map(|&i| i as u16).collect();
        out.add_unsorted(idx, f);
        out
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::monomial(dim, indices, Polynomial::one())
    }

    /// Degree-one element from its components.
    pub fn from_vector(components: &[Polynomial]) -> Self {
        let mut out = Self::zero(components.len(), 1);
        for (i, c) in components.iter().enumerate() {
            out.add_component(vec![i as u16], c.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero components in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (&Indices, &Polynomial)> {
        self.terms.iter()
    }

    /// Component at the given indices (any order).
    pub fn component(&self, indices: &[usize]) -> Polynomial {
        let mut idx: Indices = indices.iter().map(|&i| i as u16).collect();
        match sort_with_sign(&mut idx) {
            None => Polynomial::zero(),
            Some(s) => {
                let c = self.terms.get(&idx).cloned().unwrap_or_default();
                if s < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// The degree-zero value.
    pub fn scalar_part(&self) -> Polynomial {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// Components of a degree-one element.
    pub fn to_vector(&self) -> Vec<Polynomial> {
        assert_eq!(self.degree, 1, "to_vector on degree {}", self.degree);
        (0..self.dim).map(|i| self.component(&[i])).collect()
    }

    pub(crate) fn add_component(&mut self, idx: Indices, f: Polynomial) {
        if f.is_zero() {
            return;
        }
        debug_assert_eq!(idx.len(), self.degree);
        debug_assert!(idx.iter().all(|&i| (i as usize) < self.dim));
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(f);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += f;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_unsorted(&mut self, mut idx: Indices, f: Polynomial) {
        if let Some(s) = sort_with_sign(&mut idx) {
            self.add_component(idx, if s < 0 { -f } else { f });
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_component(idx.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, f: &Polynomial) -> Self {
        self.map_coefficients(|c| c * f)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map_coefficients(|c| c.scale(r))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "wedge across frames of different size");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return out;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_unsorted(idx, ca * cb);
            }
        }
        out
    }

    /// Reinterpret the same components over a different frame marker.
    pub fn retag<L>(self) -> Alternating<L> {
        Alternating { dim: self.dim, degree: self.degree, terms: self.terms, _kind: PhantomData }
    }

    /// Move every index by `offset` into a frame of size `dim`.
    pub fn shifted<L>(&self, dim: usize, offset: usize) -> Alternating<L> {
        let mut out = Alternating::zero(dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_component(idx.iter().map(|&i| i + offset as u16).collect(), c.clone());
        }
        out
    }

    /// Full contraction `sum_I a_I b_I` with an element of the dual frame.
    pub fn contract_full<L>(&self, other: &Alternating<L>) -> Polynomial {
        assert_eq!(self.degree, other.degree);
        let mut acc = Polynomial::zero();
        for (idx, c) in &self.terms {
            if let Some(d) = other.terms.get(idx) {
                acc += c * d;
            }
        }
        acc
    }

    /// Contract a covector in the first slot: `i_v (X1 ^ ... ^ Xk)`.
    pub fn contract_first<L>(&self, covector: &Alternating<L>) -> Self {
        assert_eq!(covector.degree, 1);
        assert!(self.degree >= 1, "contraction of a degree-zero element");
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (r, &i) in idx.iter().enumerate() {
                let v = covector.component(&[i as usize]);
                if v.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(r);
                let term = c * &v;
                out.add_component(rest, if r % 2 == 1 { -term } else { term });
            }
        }
        out
    }

    /// Apply a linear map of the frame to every factor (derivation rule):
    /// `D(a ^ b) = D(a) ^ b + a ^ D(b)`. `image(i)` is the image of the
    /// `i`-th frame element.
    pub fn derivation(&self, image: impl Fn(usize) -> Vec<Polynomial>) -> Self {
        let images: Vec<Vec<Polynomial>> = (0..self.dim).map(image).collect();
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            for r in 0..idx.len() {
                for (j, v) in images[idx[r] as usize].iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let mut new = idx.clone();
                    new[r] = j as u16;
                    out.add_unsorted(new, c * v);
                }
            }
        }
        out
    }

    /// Apply a linear map of the frame to each factor multiplicatively.
    pub fn pushforward(&self, image: impl Fn(usize) -> Alternating<K>) -> Self {
        let images: Vec<Alternating<K>> = (0..self.dim).map(image).collect();
        let mut out = Self::zero(images.first().map_or(self.dim, |v| v.dim), self.degree);
        for (idx, c) in &self.terms {
            let mut acc = Self::scalar(out.dim, c.clone());
            for &i in idx {
                acc = acc.wedge(&images[i as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out += acc;
        }
        out
    }
}

impl<K> Add<&Alternating<K>> for &Alternating<K> {
    type Output = Alternating<K>;
    fn add(self, rhs: &Alternating<K>) -> Alternating<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K> Add for Alternating<K> {
    type Output = Alternating<K>;
    fn add(mut self, rhs: Alternating<K>) -> Alternating<K> {
        self += rhs;
        self
    }
}

impl<K> AddAssign<&Alternating<K>> for Alternating<K> {
    fn add_assign(&mut self, rhs: &Alternating<K>) {
        assert_eq!(self.dim, rhs.dim, "frame size mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in sum");
        for (idx, c) in &rhs.terms {
            self.add_component(idx.clone(), c.clone());
        }
    }
}

impl<K> AddAssign for Alternating<K> {
    fn add_assign(&mut self, rhs: Alternating<K>) {
        assert_eq!(self.dim, rhs.dim, "frame size mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in sum");
        for (idx, c) in rhs.terms {
            self.add_component(idx, c);
        }
    }
}

impl<K> Sub<&Alternating<K>> for &Alternating<K> {
    type Output = Alternating<K>;
    fn sub(self, rhs: &Alternating<K>) -> Alternating<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K> Sub for Alternating<K> {
    type Output = Alternating<K>;
    fn sub(mut self, rhs: Alternating<K>) -> Alternating<K> {
        self -= &rhs;
        self
    }
}

impl<K> SubAssign<&Alternating<K>> for Alternating<K> {
    fn sub_assign(&mut self, rhs: &Alternating<K>) {
        assert_eq!(self.dim, rhs.dim, "frame size mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in difference");
        for (idx, c) in &rhs.terms {
            self.add_component(idx.clone(), -c);
        }
    }
}

impl<K> Neg for &Alternating<K> {
    type Output = Alternating<K>;
    fn neg(self) -> Alternating<K> {
        self.map_coefficients(|c| -c)
    }
}

impl<K> Neg for Alternating<K> {
    type Output = Alternating<K>;
    fn neg(self) -> Alternating<K> {
        -&self
    }
}

/// Render `sum coeff * tok_{i1}^tok_{i2}...` with a caller-supplied token and
/// coefficient printer.
pub(crate) fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Indices, &'a Polynomial)>,
    token: impl Fn(usize) -> String,
    coeff: impl Fn(&Polynomial) -> String,
) -> String {
    let mut out = String::new();
    for (k, (idx, c)) in terms.enumerate() {
        let dirs: Vec<String> = idx.iter().map(|&i| token(i as usize)).collect();
        let dirs = dirs.join("^");
        let (neg, body) = if dirs.is_empty() {
            let s = coeff(c);
            match s.strip_prefix('-') {
                Some(rest) if c.is_single_term() => (true, rest.to_string()),
                _ => (false, s),
            }
        } else if c.is_single_term() {
            let s = coeff(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if mag == "1" {
                (neg, dirs)
            } else {
                (neg, format!("{mag}*{dirs}"))
            }
        } else {
            (false, format!("({})*{dirs}", coeff(c)))
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
