//! Polars, the apolarity pairing, catalecticant matrices and dual forms.
//!
//! For a form F of degree m and a form G of degree k on the opposite space,
//! the mixed polar is defined by the differential closed form
//!
//! ```text
//!     P_G(F) = (m-k)!/m! * G(d) F
//! ```
//!
//! where `G(d)` substitutes `d/dx_i` for the i-th opposite variable. The
//! pairing is normalized so that pairing a pure power `a^m` against F gives
//! the value `F(a)`; equivalently `<y^a, x^b> = delta_ab * a!/m!`. The
//! classical tuple-of-points polarization is recovered from this by
//! linearity and serves as the test oracle, not the implementation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::form::{monomials_of_degree, Form, MultiIndex, PointVec, Space};
use crate::matrix::{LinearSolution, RatMatrix};
use crate::{Error, Result};

/// First polar of `f` with respect to the point `a`:
/// `(1/m) * sum_i a_i df/dx_i`, a form of degree `m - 1`.
pub fn polar(f: &Form, a: &PointVec) -> Result<Form> {
    if f.degree() == 0 {
        return Err(Error::ZeroDegreePolar);
    }
    if a.role() != f.space().argument_role() {
        return Err(Error::RoleMismatch);
    }
    if a.nvars() != f.nvars() {
        return Err(Error::PointDimension { got: a.nvars(), want: f.nvars() });
    }
    let m = BigRational::from_integer(f.degree().into());
    let mut acc = Form::zero(f.space(), f.nvars(), f.degree() - 1);
    for (i, coord) in a.coords().iter().enumerate() {
        if coord.is_zero() {
            continue;
        }
        let di = f.differentiate(&MultiIndex::unit(f.nvars(), i))?;
        acc = acc.add(&di.scale(coord))?;
    }
    Ok(acc.scale(&m.recip()))
}

/// Mixed polar `P_G(F) = (m-k)!/m! * G(d) F`; `G` must live on the dual
/// space to `F`'s argument space and have degree `k <= m`.
pub fn mixed_polar(f: &Form, g: &Form) -> Result<Form> {
    if g.space() != f.space().dual() {
        return Err(Error::SpaceMismatch { left: f.space(), right: g.space() });
    }
    if g.nvars() != f.nvars() {
        return Err(Error::NvarsMismatch { left: f.nvars(), right: g.nvars() });
    }
    let (m, k) = (f.degree(), g.degree());
    if k > m {
        return Err(Error::PolarDegreeRange { k, m });
    }
    let scale = BigRational::new(crate::form::factorial(m - k), crate::form::factorial(m));
    let mut acc = Form::zero(f.space(), f.nvars(), m - k);
    for (alpha, g_coef) in g.terms() {
        let d = f.differentiate(alpha)?;
        acc = acc.add(&d.scale(g_coef))?;
    }
    Ok(acc.scale(&scale))
}

/// Apolarity pairing of two forms of equal degree on opposite spaces:
/// `<G, F> = sum_a g_a f_a a!/m!`.
pub fn pairing(g: &Form, f: &Form) -> Result<BigRational> {
    if g.space() != f.space().dual() {
        return Err(Error::SpaceMismatch { left: f.space(), right: g.space() });
    }
    if g.nvars() != f.nvars() {
        return Err(Error::NvarsMismatch { left: f.nvars(), right: g.nvars() });
    }
    if g.degree() != f.degree() {
        return Err(Error::DegreeMismatch { left: g.degree(), right: f.degree() });
    }
    let m_fact = crate::form::factorial(f.degree());
    let mut acc = BigRational::zero();
    for (alpha, g_coef) in g.terms() {
        let f_coef = f.coefficient(alpha);
        if f_coef.is_zero() {
            continue;
        }
        acc += g_coef * f_coef * BigRational::new(alpha.factorial(), m_fact.clone());
    }
    Ok(acc)
}

/// Value of the full polarization of `f` at an m-tuple of points,
/// computed as the pairing of `f` against the product of the linear forms
/// of the points. Fully symmetric in the points.
pub fn polarization_tensor_eval(f: &Form, points: &[PointVec]) -> Result<BigRational> {
    if points.len() != f.degree() as usize {
        return Err(Error::PointCount { want: f.degree() as usize, got: points.len() });
    }
    let dual = f.space().dual();
    let mut product = Form::constant(dual, f.nvars(), BigRational::one());
    for p in points {
        if p.role() != f.space().argument_role() {
            return Err(Error::RoleMismatch);
        }
        if p.nvars() != f.nvars() {
            return Err(Error::PointDimension { got: p.nvars(), want: f.nvars() });
        }
        let linear = Form::from_terms(
            dual,
            f.nvars(),
            1,
            p.coords()
                .iter()
                .enumerate()
                .map(|(i, c)| (MultiIndex::unit(f.nvars(), i), c.clone())),
        )?;
        product = product.multiply(&linear)?;
    }
    pairing(&product, f)
}

/// The matrix of the apolarity map of `f` in polar degree `k`, taking
/// degree-k forms on the opposite space to degree-(m-k) forms on `f`'s side.
///
/// Rows are indexed by the degree-(m-k) monomials in `f`'s own variables,
/// columns by the degree-k monomials on the opposite space, both graded-lex
/// descending. Entry `(b, a)` equals `(m-k)!/m! * (a+b)!/b! * f_{a+b}`,
/// which is the coefficient of the row monomial in the mixed polar of `f`
/// by the column monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalecticantMatrix {
    m: u32,
    k: u32,
    space: Space,
    nvars: usize,
    row_basis: Vec<MultiIndex>,
    col_basis: Vec<MultiIndex>,
    entries: RatMatrix,
}

impl CatalecticantMatrix {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Space of the source form (the map's codomain side).
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn row_basis(&self) -> &[MultiIndex] {
        &self.row_basis
    }

    pub fn col_basis(&self) -> &[MultiIndex] {
        &self.col_basis
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.entries.is_square()
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn det(&self) -> Result<BigRational> {
        self.entries.det()
    }

    /// Apply the map to a degree-k form on the opposite space.
    pub fn apply(&self, g: &Form) -> Result<Form> {
        if g.space() != self.space.dual() {
            return Err(Error::SpaceMismatch { left: self.space, right: g.space() });
        }
        if g.degree() != self.k {
            return Err(Error::DegreeMismatch { left: g.degree(), right: self.k });
        }
        let image = self.entries.mul_vec(&g.coefficient_vector(&self.col_basis))?;
        Form::from_terms(
            self.space,
            self.nvars,
            self.m - self.k,
            self.row_basis.iter().cloned().zip(image),
        )
    }
}

pub(crate) fn build_catalecticant(f: &Form, k: u32) -> CatalecticantMatrix {
    let m = f.degree();
    let nvars = f.nvars();
    let row_basis = monomials_of_degree(nvars, m - k);
    let col_basis = monomials_of_degree(nvars, k);
    let scale = BigRational::new(crate::form::factorial(m - k), crate::form::factorial(m));
    let entries = RatMatrix::from_fn(row_basis.len(), col_basis.len(), |r, c| {
        let gamma = row_basis[r].add(&col_basis[c]);
        let coef = f.coefficient(&gamma);
        if coef.is_zero() {
            return BigRational::zero();
        }
        let weight = BigRational::new(gamma.factorial(), row_basis[r].factorial());
        coef * weight * &scale
    });
    CatalecticantMatrix {
        m,
        k,
        space: f.space(),
        nvars,
        row_basis,
        col_basis,
        entries,
    }
}

/// Catalecticant matrix of `f` in polar degree `k`, `1 <= k <= m`.
pub fn apolarity_matrix(f: &Form, k: u32) -> Result<CatalecticantMatrix> {
    if k < 1 || k > f.degree() {
        return Err(Error::PolarDegreeRange { k, m: f.degree() });
    }
    Ok(build_catalecticant(f, k))
}

/// True when the middle catalecticant of the even-degree form `f` is
/// invertible over the rationals.
pub fn is_nondegenerate(f: &Form) -> Result<bool> {
    let m = f.degree();
    if m % 2 != 0 {
        return Err(Error::OddDegree(m));
    }
    if m == 0 {
        return Ok(!f.is_zero());
    }
    let cat = build_catalecticant(f, m / 2);
    Ok(cat.rank() == cat.entries().rows())
}

/// Solve the middle catalecticant for the unique `G` on the opposite space
/// with `mixed_polar(f, G) = u`; requires non-degenerate `f` of degree `2k`
/// and `u` of degree `k` on `f`'s side.
pub fn apolar_inverse_apply(f: &Form, u: &Form) -> Result<Form> {
    let m = f.degree();
    if m % 2 != 0 {
        return Err(Error::OddDegree(m));
    }
    let k = m / 2;
    if u.degree() != k {
        return Err(Error::DegreeMismatch { left: u.degree(), right: k });
    }
    if u.space() != f.space() {
        return Err(Error::SpaceMismatch { left: f.space(), right: u.space() });
    }
    if u.nvars() != f.nvars() {
        return Err(Error::NvarsMismatch { left: f.nvars(), right: u.nvars() });
    }
    let cat = build_catalecticant(f, k);
    let rhs = u.coefficient_vector(cat.row_basis());
    match cat.entries().solve(&rhs)? {
        LinearSolution::Unique(coeffs) => Form::from_terms(
            f.space().dual(),
            f.nvars(),
            k,
            cat.col_basis().iter().cloned().zip(coeffs),
        ),
        _ => Err(Error::DegenerateForm),
    }
}

/// One inconsistency found while testing whether an inverse catalecticant
/// is itself a catalecticant: two splittings of the same total exponent
/// `gamma` demand different coefficients for the candidate dual form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelViolation {
    pub gamma: MultiIndex,
    pub first_split: (MultiIndex, MultiIndex),
    pub second_split: (MultiIndex, MultiIndex),
    pub first_value: BigRational,
    pub second_value: BigRational,
}

/// Witness that the inverse of a middle catalecticant is not Hankel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelDefect {
    pub violations: Vec<HankelViolation>,
}

/// Result of [`dual_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualOutcome {
    Dual(Form),
    Defect(HankelDefect),
}

/// Invert the middle catalecticant of `f` and test whether the inverse is
/// the catalecticant of a form of the same degree on the opposite space.
/// If so, return that dual form (its apolarity map is then exactly the
/// inverse matrix); otherwise report every violated splitting.
pub fn dual_form(f: &Form) -> Result<DualOutcome> {
    let m = f.degree();
    if m % 2 != 0 {
        return Err(Error::OddDegree(m));
    }
    if m == 0 {
        // ap^0 is multiplication by the constant; the dual is its reciprocal.
        if f.is_zero() {
            return Err(Error::DegenerateForm);
        }
        let c = f.coefficient(&MultiIndex::zero(f.nvars()));
        return Ok(DualOutcome::Dual(Form::constant(
            f.space().dual(),
            f.nvars(),
            c.recip(),
        )));
    }
    let k = m / 2;
    let cat = build_catalecticant(f, k);
    let inv = cat.entries().inverse().map_err(|e| match e {
        Error::SingularMatrix => Error::DegenerateForm,
        other => other,
    })?;
    // inv rows are indexed by cat's column basis, inv columns by cat's rows.
    let sigma_basis = cat.col_basis();
    let rho_basis = cat.row_basis();
    let scale = BigRational::new(crate::form::factorial(m), crate::form::factorial(k));
    let mut first: std::collections::BTreeMap<MultiIndex, ((MultiIndex, MultiIndex), BigRational)> =
        std::collections::BTreeMap::new();
    let mut violations = Vec::new();
    for (si, sigma) in sigma_basis.iter().enumerate() {
        for (ri, rho) in rho_basis.iter().enumerate() {
            let gamma = sigma.add(rho);
            let value =
                inv.at(si, ri) * &scale * BigRational::new(sigma.factorial(), gamma.factorial());
            match first.get(&gamma) {
                None => {
                    first.insert(gamma, ((sigma.clone(), rho.clone()), value));
                }
                Some((first_split, first_value)) => {
                    if *first_value != value {
                        violations.push(HankelViolation {
                            gamma,
                            first_split: first_split.clone(),
                            second_split: (sigma.clone(), rho.clone()),
                            first_value: first_value.clone(),
                            second_value: value,
                        });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Ok(DualOutcome::Defect(HankelDefect { violations }));
    }
    let dual = Form::from_terms(
        f.space().dual(),
        f.nvars(),
        m,
        first.into_iter().map(|(gamma, (_, value))| (gamma, value)),
    )?;
    debug_assert_eq!(
        build_catalecticant(&dual, k)
            .entries()
            .mul(cat.entries())
            .unwrap(),
        RatMatrix::identity(rho_basis.len())
    );
    Ok(DualOutcome::Dual(dual))
}

/// Maximal entry-wise failure of full symmetry found while expanding a
/// biquadric into an order-4 tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryDefect {
    pub index: [usize; 4],
    pub swapped: [usize; 4],
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Result of [`quartic_from_biquadric`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BiquadricOutcome {
    Quartic(Form),
    Defect(SymmetryDefect),
}

/// Expand a biquadric, given as a square matrix in the degree-2 monomial
/// bases with the same indexing as [`CatalecticantMatrix::entries`], into an
/// order-4 tensor and test full symmetry under all slot permutations.
///
/// The matrix of the middle catalecticant of any quartic passes the test and
/// reproduces the quartic (round trip). On success the reconstructed quartic
/// is returned after verifying that its apolarity matrix reproduces the
/// input; on a symmetry failure the maximal entry-wise violation is
/// reported. A matrix that is not even symmetric under the factor swap
/// (weighted transpose symmetry `a! B[a][b] = b! B[b][a]`) is rejected as an
/// input error.
pub fn quartic_from_biquadric(b: &RatMatrix) -> Result<BiquadricOutcome> {
    if !b.is_square() {
        return Err(Error::MatrixShape(b.rows(), b.cols(), b.cols(), b.rows()));
    }
    let n = b.rows();
    let nvars = (1..=n)
        .find(|&v| v * (v + 1) / 2 == n)
        .ok_or_else(|| Error::Parse(format!("{n} rows is not the dimension of a space of quadrics")))?;
    let basis = monomials_of_degree(nvars, 2);

    // Tensor components in the pair-of-quadric-monomials basis. With
    // c[w][u] = 2/w! * B[u][w], a genuine catalecticant yields the
    // manifestly swap-symmetric c[w][u] = (w+u)!/4! * f_{w+u}.
    let two = BigInt::from(2);
    let comp = |w: usize, u: usize| -> BigRational {
        b.at(u, w) * BigRational::new(two.clone(), basis[w].factorial())
    };
    for w in 0..n {
        for u in (w + 1)..n {
            if comp(w, u) != comp(u, w) {
                return Err(Error::NotSwapSymmetric(u, w));
            }
        }
    }

    // Expand through the polarization of each quadric monomial: the entry
    // of pl_2(x^w) at (i, j) is 1 for w = 2e_i with i = j, 1/2 for
    // w = e_i + e_j with i != j, and 0 otherwise.
    let pl2: Vec<RatMatrix> = basis
        .iter()
        .map(|w| {
            RatMatrix::from_fn(nvars, nvars, |i, j| {
                let mut e = vec![0u32; nvars];
                e[i] += 1;
                e[j] += 1;
                if MultiIndex::new(e) != *w {
                    BigRational::zero()
                } else if i == j {
                    BigRational::one()
                } else {
                    BigRational::new(BigInt::one(), two.clone())
                }
            })
        })
        .collect();

    let tensor_entry = |i: usize, j: usize, k: usize, l: usize| -> BigRational {
        let mut acc = BigRational::zero();
        for w in 0..n {
            let left = pl2[w].at(i, j);
            if left.is_zero() {
                continue;
            }
            for u in 0..n {
                let right = pl2[u].at(k, l);
                if right.is_zero() {
                    continue;
                }
                acc += comp(w, u) * left * right;
            }
        }
        acc
    };

    // Built-in symmetries (within each slot pair and under the pair swap)
    // hold by construction; full symmetry reduces to the middle-slot swap.
    let mut worst: Option<SymmetryDefect> = None;
    for i in 0..nvars {
        for j in 0..nvars {
            for k in 0..nvars {
                for l in 0..nvars {
                    let lhs = tensor_entry(i, j, k, l);
                    let rhs = tensor_entry(i, k, j, l);
                    if lhs != rhs {
                        let gap = (&lhs - &rhs).abs();
                        let is_worse = match &worst {
                            None => true,
                            Some(prev) => gap > (&prev.lhs - &prev.rhs).abs(),
                        };
                        if is_worse {
                            worst = Some(SymmetryDefect {
                                index: [i, j, k, l],
                                swapped: [i, k, j, l],
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
    }
    if let Some(defect) = worst {
        return Ok(BiquadricOutcome::Defect(defect));
    }

    // Restrict to the diagonal: F(x) = sum over splittings of c[w][u] x^{w+u}.
    let mut terms: std::collections::BTreeMap<MultiIndex, BigRational> =
        std::collections::BTreeMap::new();
    for w in 0..n {
        for u in 0..n {
            let gamma = basis[w].add(&basis[u]);
            let entry = terms.entry(gamma).or_insert_with(BigRational::zero);
            *entry += comp(w, u);
        }
    }
    let quartic = Form::from_terms(Space::OnV, nvars, 4, terms)?;
    let reproduced = build_catalecticant(&quartic, 2);
    assert_eq!(
        reproduced.entries(),
        b,
        "fully symmetric biquadric failed to reproduce its catalecticant"
    );
    Ok(BiquadricOutcome::Quartic(quartic))
}
