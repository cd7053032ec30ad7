//! Homogeneous multivariate forms over exact rationals.
//!
//! A [`Form`] is a sparse map from exponent multi-indices to `BigRational`
//! coefficients, tagged with the space it lives on: a form *on V* is a
//! polynomial in the coordinates `x_0 > x_1 > ...` of V, a form *on the
//! dual* is a polynomial in the dual coordinates `y_i`. Everything is
//! immutable and ordered by one global monomial order, graded lexicographic
//! with `x_0 > x_1 > ...`, so that serializations and matrix bases are
//! identical across runs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{rational_to_string, RatMatrix};
use crate::{Error, Result};

/// The space a form lives on.
///
/// `OnV` marks forms on V (elements of the symmetric powers of the dual
/// space, written in the variables `x_i`); `OnDual` marks forms on the dual
/// space (written in the variables `y_i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    OnV,
    OnDual,
}

impl Space {
    pub fn dual(self) -> Space {
        match self {
            Space::OnV => Space::OnDual,
            Space::OnDual => Space::OnV,
        }
    }

    /// The space points must live in to be plugged into such a form.
    pub fn argument_role(self) -> Role {
        match self {
            Space::OnV => Role::InV,
            Space::OnDual => Role::InDual,
        }
    }

    pub fn variable_letter(self) -> char {
        match self {
            Space::OnV => 'x',
            Space::OnDual => 'y',
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::OnV => write!(f, "V"),
            Space::OnDual => write!(f, "V*"),
        }
    }
}

/// The space a point lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    InV,
    InDual,
}

impl Role {
    pub fn dual(self) -> Role {
        match self {
            Role::InV => Role::InDual,
            Role::InDual => Role::InV,
        }
    }

    /// A point is the coefficient vector of a linear form on the opposite
    /// space; this is the space that linear form lives on.
    pub fn linear_form_space(self) -> Space {
        match self {
            Role::InV => Space::OnDual,
            Role::InDual => Space::OnV,
        }
    }
}

/// Exponent vector of a monomial, one entry per variable.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on the exponents, so that for a fixed degree
/// `x_0^d` is the largest monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Product of the factorials of the components.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&e| factorial(e)).product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `m! / gamma!` for `|gamma| = m`.
pub fn multinomial(m: u32, gamma: &MultiIndex) -> BigInt {
    factorial(m) / gamma.factorial()
}

/// All monomials of the given degree, graded-lex descending
/// (`x_0^d` first, `x_{n-1}^d` last).
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
    fn rec(out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, remaining_vars: usize, remaining_deg: u32) {
        if remaining_vars == 1 {
            prefix.push(remaining_deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining_deg).rev() {
            prefix.push(e);
            rec(out, prefix, remaining_vars - 1, remaining_deg - e);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if degree == 0 { vec![MultiIndex(vec![])] } else { vec![] };
    }
    let mut raw = Vec::new();
    rec(&mut raw, &mut Vec::new(), nvars, degree);
    raw.into_iter().map(MultiIndex).collect()
}

/// A point, either in V or in the dual space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointVec {
    role: Role,
    coords: Vec<BigRational>,
}

impl PointVec {
    pub fn new(role: Role, coords: Vec<BigRational>) -> Self {
        PointVec { role, coords }
    }

    pub fn from_integers(role: Role, coords: &[i64]) -> Self {
        PointVec {
            role,
            coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> PointVec {
        PointVec {
            role: self.role,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Projective representative with first nonzero coordinate 1.
    pub fn normalize_projective(&self) -> Result<PointVec> {
        let lead = self.coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroLinearForm)?;
        Ok(self.scale(&lead.recip()))
    }

    pub fn projectively_equal(&self, other: &PointVec) -> bool {
        match (self.normalize_projective(), other.normalize_projective()) {
            (Ok(a), Ok(b)) => a.coords == b.coords,
            _ => false,
        }
    }
}

impl fmt::Display for PointVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rational_to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A homogeneous form of fixed degree.
///
/// Invariants: every stored multi-index has length `nvars` and degree
/// exactly `degree`; no zero coefficients are kept. The zero form is the
/// empty term map (its degree is still recorded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    space: Space,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Form {
    pub fn zero(space: Space, nvars: usize, degree: u32) -> Self {
        Form {
            space,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build a form from terms, merging duplicates and dropping zeros.
    pub fn from_terms(
        space: Space,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
        for (idx, coef) in terms {
            if idx.nvars() != nvars {
                return Err(Error::NvarsMismatch { left: idx.nvars(), right: nvars });
            }
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch { left: idx.degree(), right: degree });
            }
            let entry = map.entry(idx).or_insert_with(BigRational::zero);
            *entry += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Form { space, nvars, degree, terms: map })
    }

    pub fn monomial(space: Space, nvars: usize, idx: MultiIndex, coef: BigRational) -> Result<Self> {
        let degree = idx.degree();
        Form::from_terms(space, nvars, degree, [(idx, coef)])
    }

    pub fn variable(space: Space, nvars: usize, var: usize) -> Self {
        Form::monomial(space, nvars, MultiIndex::unit(nvars, var), BigRational::one()).unwrap()
    }

    pub fn constant(space: Space, nvars: usize, value: BigRational) -> Self {
        Form::from_terms(space, nvars, 0, [(MultiIndex::zero(nvars), value)]).unwrap()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex ascending order (iterate `.rev()` for the
    /// canonical descending listing).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> BigRational {
        self.terms.get(idx).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient vector in the given monomial basis.
    pub fn coefficient_vector(&self, basis: &[MultiIndex]) -> Vec<BigRational> {
        basis.iter().map(|idx| self.coefficient(idx)).collect()
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space, right: other.space });
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut terms = self.terms.clone();
        for (idx, coef) in &other.terms {
            let entry = terms.entry(idx.clone()).or_insert_with(BigRational::zero);
            *entry += coef;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form { space: self.space, nvars: self.nvars, degree: self.degree, terms })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            space: self.space,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Form {
        if c.is_zero() {
            return Form::zero(self.space, self.nvars, self.degree);
        }
        Form {
            space: self.space,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, v)| (i.clone(), v * c)).collect(),
        }
    }

    pub fn multiply(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut terms: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let idx = i.add(j);
                let entry = terms.entry(idx).or_insert_with(BigRational::zero);
                *entry += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form {
            space: self.space,
            nvars: self.nvars,
            degree: self.degree + other.degree,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Form {
        let mut acc = Form::constant(self.space, self.nvars, BigRational::one());
        for _ in 0..e {
            acc = acc.multiply(self).unwrap();
        }
        acc
    }

    pub fn evaluate(&self, p: &PointVec) -> Result<BigRational> {
        if p.role() != self.space.argument_role() {
            return Err(Error::RoleMismatch);
        }
        if p.nvars() != self.nvars {
            return Err(Error::PointDimension { got: p.nvars(), want: self.nvars });
        }
        let mut total = BigRational::zero();
        for (idx, coef) in &self.terms {
            let mut v = coef.clone();
            for (c, &e) in p.coords().iter().zip(idx.exponents()) {
                if e > 0 {
                    v *= c.pow(e as i32);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Exact iterated partial derivative `d^|idx| self / dx^idx`.
    pub fn differentiate(&self, idx: &MultiIndex) -> Result<Form> {
        if idx.nvars() != self.nvars {
            return Err(Error::NvarsMismatch { left: idx.nvars(), right: self.nvars });
        }
        let order = idx.degree();
        if order > self.degree {
            return Ok(Form::zero(self.space, self.nvars, 0));
        }
        let mut terms: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
        for (gamma, coef) in &self.terms {
            let Some(target) = gamma.checked_sub(idx) else { continue };
            // falling factorial gamma!/(gamma-idx)!
            let mut factor = BigInt::one();
            for (&g, &d) in gamma.exponents().iter().zip(idx.exponents()) {
                for j in 0..d {
                    factor *= g - j;
                }
            }
            let entry = terms.entry(target).or_insert_with(BigRational::zero);
            *entry += coef * BigRational::from_integer(factor);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form {
            space: self.space,
            nvars: self.nvars,
            degree: self.degree - order,
            terms,
        })
    }

    /// The composition `x -> self(M x)`; `M` must be invertible.
    pub fn change_coords(&self, m: &RatMatrix) -> Result<Form> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::MatrixShape(m.rows(), m.cols(), self.nvars, self.nvars));
        }
        if m.rank() < self.nvars {
            return Err(Error::SingularMatrix);
        }
        // Linear images of the variables: x_j -> sum_k M[j][k] x_k.
        let images: Vec<Form> = (0..self.nvars)
            .map(|j| {
                Form::from_terms(
                    self.space,
                    self.nvars,
                    1,
                    (0..self.nvars).map(|k| (MultiIndex::unit(self.nvars, k), m.at(j, k).clone())),
                )
                .unwrap()
            })
            .collect();
        let mut result = Form::zero(self.space, self.nvars, self.degree);
        for (idx, coef) in &self.terms {
            let mut term = Form::constant(self.space, self.nvars, coef.clone());
            for (j, &e) in idx.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.multiply(&images[j].pow(e))?;
                }
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let letter = self.space.variable_letter();
        let mut first = true;
        for (idx, coef) in self.terms.iter().rev() {
            let mag = coef.abs();
            if first {
                if coef.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = idx
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("{letter}{i}") } else { format!("{letter}{i}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", rational_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_to_string(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Deterministic random form on V with integer coefficients drawn uniformly
/// from `[-coeff_bound, coeff_bound]`.
pub fn random_form(seed: u64, nvars: usize, degree: u32, coeff_bound: u64) -> Form {
    random_form_on(Space::OnV, seed, nvars, degree, coeff_bound)
}

pub fn random_form_on(space: Space, seed: u64, nvars: usize, degree: u32, coeff_bound: u64) -> Form {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = coeff_bound as i64;
    let terms = monomials_of_degree(nvars, degree).into_iter().map(|idx| {
        let c = rng.gen_range(-bound..=bound);
        (idx, BigRational::from_integer(c.into()))
    });
    Form::from_terms(space, nvars, degree, terms).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    use crate::test_support::fermat_plus;

    #[test]
    fn monomial_product() {
        let x0 = Form::variable(Space::OnV, 2, 0);
        let sq = x0.multiply(&x0).unwrap();
        assert_eq!(sq, Form::monomial(Space::OnV, 2, mi(&[2, 0]), rat(1)).unwrap());
    }

    #[test]
    fn additive_inverse_gives_empty_term_map() {
        let x0 = Form::variable(Space::OnV, 2, 0);
        let sq = x0.multiply(&x0).unwrap();
        let zero = sq.add(&sq.neg()).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 2);
        assert_eq!(zero.num_terms(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let x0 = Form::variable(Space::OnV, 2, 0);
        let x1 = Form::variable(Space::OnV, 2, 1);
        let sum = x0.add(&x1).unwrap();
        let diff = x0.sub(&x1).unwrap();
        let product = sum.multiply(&diff).unwrap();
        let expect = Form::from_terms(
            Space::OnV,
            2,
            2,
            [(mi(&[2, 0]), rat(1)), (mi(&[0, 2]), rat(-1))],
        )
        .unwrap();
        assert_eq!(product, expect);
    }

    #[test]
    fn mismatched_operands_error() {
        let f = Form::variable(Space::OnV, 2, 0);
        let g = Form::variable(Space::OnDual, 2, 0);
        assert!(matches!(f.add(&g), Err(Error::SpaceMismatch { .. })));
        let h = Form::variable(Space::OnV, 3, 0);
        assert!(matches!(f.multiply(&h), Err(Error::NvarsMismatch { .. })));
        let sq = f.multiply(&f).unwrap();
        assert!(matches!(f.add(&sq), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn evaluate_direct_substitution() {
        // x0^2 x1 at (2, 3) -> 12
        let f = Form::monomial(Space::OnV, 2, mi(&[2, 1]), rat(1)).unwrap();
        let p = PointVec::from_integers(Role::InV, &[2, 3]);
        assert_eq!(f.evaluate(&p).unwrap(), rat(12));
    }

    #[test]
    fn evaluate_at_origin_is_zero_for_positive_degree() {
        let f = random_form(5, 3, 4, 9);
        let p = PointVec::from_integers(Role::InV, &[0, 0, 0]);
        assert_eq!(f.evaluate(&p).unwrap(), rat(0));
    }

    #[test]
    fn evaluate_oracle_hand_substitution() {
        let f = fermat_plus();
        let p = PointVec::from_integers(Role::InV, &[1, 1]);
        assert_eq!(f.evaluate(&p).unwrap(), rat(18));
    }

    #[test]
    fn evaluate_rejects_wrong_role() {
        let f = Form::variable(Space::OnV, 2, 0);
        let p = PointVec::from_integers(Role::InDual, &[1, 0]);
        assert!(matches!(f.evaluate(&p), Err(Error::RoleMismatch)));
    }

    #[test]
    fn differentiate_power_rule() {
        // d^2/dx0^2 (x0^3) = 6 x0
        let f = Form::monomial(Space::OnV, 2, mi(&[3, 0]), rat(1)).unwrap();
        let d = f.differentiate(&mi(&[2, 0])).unwrap();
        assert_eq!(d, Form::monomial(Space::OnV, 2, mi(&[1, 0]), rat(6)).unwrap());
        // d^2/dx0 dx1 (x0^2 x1) = 2 x0
        let g = Form::monomial(Space::OnV, 2, mi(&[2, 1]), rat(1)).unwrap();
        let dg = g.differentiate(&mi(&[1, 1])).unwrap();
        assert_eq!(dg, Form::monomial(Space::OnV, 2, mi(&[1, 0]), rat(2)).unwrap());
    }

    #[test]
    fn differentiate_oracle_hand_derivative() {
        // d^2/dx0^2 (x0^4 + x1^4 + (x0+x1)^4) = 24 x0^2 + 24 x0 x1 + 12 x1^2
        let f = fermat_plus();
        let d = f.differentiate(&mi(&[2, 0])).unwrap();
        let expect = Form::from_terms(
            Space::OnV,
            2,
            2,
            [(mi(&[2, 0]), rat(24)), (mi(&[1, 1]), rat(24)), (mi(&[0, 2]), rat(12))],
        )
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn euler_identity_on_random_forms() {
        for seed in 0..20u64 {
            let nvars = 2 + (seed as usize % 3);
            let degree = 1 + (seed as u32 % 5);
            let f = random_form(seed, nvars, degree, 7);
            let mut acc = Form::zero(Space::OnV, nvars, degree);
            for i in 0..nvars {
                let xi = Form::variable(Space::OnV, nvars, i);
                let di = f.differentiate(&MultiIndex::unit(nvars, i)).unwrap();
                acc = acc.add(&xi.multiply(&di).unwrap()).unwrap();
            }
            assert_eq!(acc, f.scale(&rat(degree as i64)));
        }
    }

    #[test]
    fn change_coords_identity_and_swap() {
        let f = fermat_plus();
        let id = RatMatrix::identity(2);
        assert_eq!(f.change_coords(&id).unwrap(), f);

        let swap = RatMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        let sq = Form::monomial(Space::OnV, 2, mi(&[2, 0]), rat(1)).unwrap();
        assert_eq!(
            sq.change_coords(&swap).unwrap(),
            Form::monomial(Space::OnV, 2, mi(&[0, 2]), rat(1)).unwrap()
        );
    }

    #[test]
    fn change_coords_oracle_shear() {
        // x0 x1 under x0 -> x0 + x1, x1 -> x1 becomes x0 x1 + x1^2
        let f = Form::monomial(Space::OnV, 2, mi(&[1, 1]), rat(1)).unwrap();
        let m = RatMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(0), rat(1)]]).unwrap();
        let g = f.change_coords(&m).unwrap();
        let expect = Form::from_terms(
            Space::OnV,
            2,
            2,
            [(mi(&[1, 1]), rat(1)), (mi(&[0, 2]), rat(1))],
        )
        .unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn change_coords_rejects_singular() {
        let f = Form::variable(Space::OnV, 2, 0);
        let m = RatMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]]).unwrap();
        assert!(matches!(f.change_coords(&m), Err(Error::SingularMatrix)));
    }

    #[test]
    fn change_coords_round_trip_and_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for seed in 0..15u64 {
            let nvars = 2 + (seed as usize % 2);
            let f = random_form(seed, nvars, 3, 5);
            // random invertible matrix
            let m = loop {
                let cand = RatMatrix::from_fn(nvars, nvars, |_, _| rat(rng.gen_range(-4..=4)));
                if cand.rank() == nvars {
                    break cand;
                }
            };
            let inv = m.inverse().unwrap();
            let back = f.change_coords(&m).unwrap().change_coords(&inv).unwrap();
            assert_eq!(back, f);

            let p = PointVec::new(
                Role::InV,
                (0..nvars).map(|_| rat(rng.gen_range(-3..=3))).collect(),
            );
            let mp = PointVec::new(Role::InV, m.mul_vec(p.coords()).unwrap());
            assert_eq!(
                f.change_coords(&m).unwrap().evaluate(&p).unwrap(),
                f.evaluate(&mp).unwrap()
            );
        }
    }

    #[test]
    fn monomial_enumeration_is_graded_lex_descending() {
        let monos = monomials_of_degree(2, 4);
        let exps: Vec<&[u32]> = monos.iter().map(MultiIndex::exponents).collect();
        assert_eq!(exps, vec![&[4, 0][..], &[3, 1], &[2, 2], &[1, 3], &[0, 4]]);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 4).len(), 35);
        // ascending Ord agrees with the reversed listing
        let mut sorted = monos.clone();
        sorted.sort();
        sorted.reverse();
        assert_eq!(sorted, monos);
    }

    #[test]
    fn random_form_is_deterministic_and_bounded() {
        let a = random_form(42, 3, 4, 9);
        let b = random_form(42, 3, 4, 9);
        assert_eq!(a, b);
        assert!(a
            .terms()
            .all(|(_, c)| c.denom().is_one() && c.numer().abs() <= 9.into()));
        let z = random_form(42, 3, 4, 0);
        assert!(z.is_zero());
    }

    #[test]
    fn random_form_seeds_differ() {
        let mut distinct = 0;
        for seed in 0..100u64 {
            if random_form(seed, 2, 3, 20) != random_form(seed + 1000, 2, 3, 20) {
                distinct += 1;
            }
        }
        assert!(distinct >= 99, "only {distinct}/100 seed pairs differed");
    }

    #[test]
    fn display_is_readable() {
        let f = fermat_plus();
        assert_eq!(
            f.to_string(),
            "2*x0^4 + 4*x0^3*x1 + 6*x0^2*x1^2 + 4*x0*x1^3 + 2*x1^4"
        );
        let g = Form::from_terms(
            Space::OnDual,
            2,
            2,
            [(mi(&[2, 0]), rat(1)), (mi(&[1, 1]), rat(-1))],
        )
        .unwrap();
        assert_eq!(g.to_string(), "y0^2 - y0*y1");
        assert_eq!(Form::zero(Space::OnV, 2, 3).to_string(), "0");
    }

    #[test]
    fn projective_normalization() {
        let p = PointVec::new(Role::InDual, vec![rat(0), rat(-2), rat(4)]);
        let n = p.normalize_projective().unwrap();
        assert_eq!(n.coords(), &[rat(0), rat(1), rat(-2)]);
        let zero = PointVec::from_integers(Role::InDual, &[0, 0]);
        assert!(matches!(zero.normalize_projective(), Err(Error::ZeroLinearForm)));
    }
}
