//! Power-sum (Waring) representations of forms and the three equivalent
//! membership routes for quartics.
//!
//! A representation claims `sum_i alpha_i H_i^m = F` for linear forms `H_i`
//! given by points of the dual space. For a non-degenerate quartic F and
//! `n = dim S^2` points, membership of the point set in the variety of
//! power sums can be decided three ways, which must always agree:
//!
//! 1. the evaluation matrix of the solved dual quadrics is a Kronecker
//!    delta (nonzero diagonal, zero off-diagonal),
//! 2. the coefficient solve `sum alpha_i H_i^4 = F` has a unique solution
//!    with every `alpha_i` nonzero,
//! 3. every quartic on the dual space vanishing at all the points pairs to
//!    zero with F.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::{monomials_of_degree, multinomial, Form, PointVec, Role, Space};
use crate::matrix::{LinearSolution, RatMatrix};
use crate::polarity::{apolar_inverse_apply, is_nondegenerate, pairing};
use crate::{Error, Result};

/// One summand of a power-sum representation: a linear form (as a point of
/// the dual space, normalized so its first nonzero coordinate is 1) and its
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepEntry {
    pub point: PointVec,
    pub alpha: BigRational,
}

/// An exact power-sum representation `sum_i alpha_i H_i^m`.
///
/// Entries are stored in a canonical order (ascending lexicographic on the
/// normalized coordinates) so that equal representations compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    m: u32,
    entries: Vec<RepEntry>,
}

impl Representation {
    pub fn new(m: u32, entries: Vec<(PointVec, BigRational)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(entries.len());
        for (point, alpha) in entries {
            if point.role() != Role::InDual {
                return Err(Error::RoleMismatch);
            }
            let lead = point
                .coords()
                .iter()
                .find(|c| !c.is_zero())
                .ok_or(Error::ZeroLinearForm)?
                .clone();
            let scaled_alpha = alpha * lead.pow(m as i32);
            normalized.push(RepEntry {
                point: point.scale(&lead.recip()),
                alpha: scaled_alpha,
            });
        }
        normalized.sort_by(|a, b| a.point.coords().cmp(b.point.coords()));
        Ok(Representation { m, entries: normalized })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[RepEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> Vec<PointVec> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }

    /// Expand the representation into the form it claims to equal.
    pub fn expand(&self, nvars: usize) -> Result<Form> {
        let mut acc = Form::zero(Space::OnV, nvars, self.m);
        for entry in &self.entries {
            if entry.point.nvars() != nvars {
                return Err(Error::PointDimension { got: entry.point.nvars(), want: nvars });
            }
            let power = power_of_linear(&entry.point, self.m)?;
            acc = acc.add(&power.scale(&entry.alpha))?;
        }
        Ok(acc)
    }
}

/// The m-th power of the linear form with coefficient vector `h`, expanded
/// with exact multinomial coefficients. A point in the dual space yields a
/// form on V and vice versa.
pub fn power_of_linear(h: &PointVec, m: u32) -> Result<Form> {
    if h.is_zero() {
        return Err(Error::ZeroLinearForm);
    }
    let nvars = h.nvars();
    let space = h.role().linear_form_space();
    let terms = monomials_of_degree(nvars, m).into_iter().filter_map(|gamma| {
        let mut coef = BigRational::from_integer(multinomial(m, &gamma));
        for (c, &e) in h.coords().iter().zip(gamma.exponents()) {
            if e > 0 {
                if c.is_zero() {
                    return None;
                }
                coef *= c.pow(e as i32);
            }
        }
        Some((gamma, coef))
    });
    Form::from_terms(space, nvars, m, terms)
}

/// Exact check that `rep` expands to `f`.
pub fn verify_representation(f: &Form, rep: &Representation) -> Result<bool> {
    if f.space() != Space::OnV {
        return Err(Error::SpaceMismatch { left: f.space(), right: Space::OnV });
    }
    if rep.m() != f.degree() {
        return Err(Error::DegreeMismatch { left: rep.m(), right: f.degree() });
    }
    Ok(rep.expand(f.nvars())? == *f)
}

/// Outcome of solving `sum_i alpha_i H_i^m = F` for the coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSolution {
    /// Unique solution; `zero_indices` lists the entries with `alpha_i = 0`
    /// (membership in the open variety of power sums needs all nonzero).
    Unique {
        alphas: Vec<BigRational>,
        zero_indices: Vec<usize>,
    },
    /// The powers are linearly dependent: a particular solution plus a
    /// basis of the relation space.
    Underdetermined {
        particular: Vec<BigRational>,
        kernel: Vec<Vec<BigRational>>,
    },
    /// `F` is not in the span of the powers.
    NoSolution,
}

fn check_points(points: &[PointVec], nvars: usize) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.role() != Role::InDual {
            return Err(Error::RoleMismatch);
        }
        if p.nvars() != nvars {
            return Err(Error::PointDimension { got: p.nvars(), want: nvars });
        }
        if p.is_zero() {
            return Err(Error::ZeroLinearForm);
        }
        for (j, q) in points.iter().enumerate().take(i) {
            if p.projectively_equal(q) {
                return Err(Error::DuplicatePoints(j, i));
            }
        }
    }
    Ok(())
}

/// Solve for the coefficients expressing `f` in the powers of the given
/// projectively distinct points.
pub fn solve_alphas(f: &Form, points: &[PointVec], m: u32) -> Result<AlphaSolution> {
    if f.degree() != m {
        return Err(Error::DegreeMismatch { left: f.degree(), right: m });
    }
    check_points(points, f.nvars())?;
    let basis = monomials_of_degree(f.nvars(), m);
    let powers: Vec<Form> = points
        .iter()
        .map(|p| power_of_linear(p, m))
        .collect::<Result<_>>()?;
    let matrix = RatMatrix::from_fn(basis.len(), points.len(), |r, c| {
        powers[c].coefficient(&basis[r])
    });
    let rhs = f.coefficient_vector(&basis);
    Ok(match matrix.solve(&rhs)? {
        LinearSolution::Unique(alphas) => {
            let zero_indices = alphas
                .iter()
                .enumerate()
                .filter(|(_, a)| a.is_zero())
                .map(|(i, _)| i)
                .collect();
            AlphaSolution::Unique { alphas, zero_indices }
        }
        LinearSolution::Underdetermined { particular, kernel } => {
            AlphaSolution::Underdetermined { particular, kernel }
        }
        LinearSolution::Inconsistent => AlphaSolution::NoSolution,
    })
}

/// Deterministic basis of the forms of the given degree on the points'
/// space vanishing at every point.
pub fn annihilator_forms(points: &[PointVec], degree: u32) -> Result<Vec<Form>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let nvars = first.nvars();
    let space = match first.role() {
        Role::InDual => Space::OnDual,
        Role::InV => Space::OnV,
    };
    let basis = monomials_of_degree(nvars, degree);
    for p in points {
        if p.nvars() != nvars || p.role() != first.role() {
            return Err(Error::PointDimension { got: p.nvars(), want: nvars });
        }
        if p.is_zero() {
            return Err(Error::ZeroLinearForm);
        }
    }
    let eval = RatMatrix::from_fn(points.len(), basis.len(), |r, c| {
        let mut v = BigRational::one();
        for (coord, &e) in points[r].coords().iter().zip(basis[c].exponents()) {
            if e > 0 {
                if coord.is_zero() {
                    return BigRational::zero();
                }
                v *= coord.pow(e as i32);
            }
        }
        v
    });
    eval.kernel_basis()
        .into_iter()
        .map(|coeffs| Form::from_terms(space, nvars, degree, basis.iter().cloned().zip(coeffs)))
        .collect()
}

/// Full annihilator basis for an empty point list is every monomial.
pub fn annihilator_forms_on(
    space: Space,
    nvars: usize,
    points: &[PointVec],
    degree: u32,
) -> Result<Vec<Form>> {
    if points.is_empty() {
        return monomials_of_degree(nvars, degree)
            .into_iter()
            .map(|idx| Form::monomial(space, nvars, idx, BigRational::one()))
            .collect();
    }
    annihilator_forms(points, degree)
}

/// The verdicts of the three membership routes for a quartic and a point
/// set of size `n = dim S^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiCertificate {
    /// Entry (i, j) is the solved dual quadric of point j evaluated at
    /// point i.
    pub eval_matrix: RatMatrix,
    /// Route 1: nonzero diagonal, zero off-diagonal.
    pub delta_ok: bool,
    /// Route 2: the unique coefficient vector, when the solve is unique.
    pub alphas: Option<Vec<BigRational>>,
    /// Indices of vanishing coefficients (route 2 needs none).
    pub zero_alphas: Vec<usize>,
    /// Dimension of the space of quartics through all the points.
    pub annihilator_dim: usize,
    /// Route 3: every annihilator quartic pairs to zero with F.
    pub annihilator_ok: bool,
    /// All three routes returned the same verdict.
    pub agree: bool,
    /// The solved dual quadrics, one per point.
    pub dual_quadrics: Vec<Form>,
}

impl MukaiCertificate {
    /// Route 2 verdict: unique solve with every coefficient nonzero.
    pub fn alphas_ok(&self) -> bool {
        self.alphas.is_some() && self.zero_alphas.is_empty()
    }

    /// The membership verdict shared by the routes (meaningful when
    /// `agree` holds).
    pub fn member(&self) -> bool {
        self.delta_ok
    }
}

/// Run all three membership routes for a non-degenerate quartic `f` and
/// `n = dim S^2` projectively distinct points whose squares are linearly
/// independent.
pub fn mukai_conditions(f: &Form, points: &[PointVec]) -> Result<MukaiCertificate> {
    if f.degree() != 4 {
        return Err(Error::DegreeMismatch { left: f.degree(), right: 4 });
    }
    if f.space() != Space::OnV {
        return Err(Error::SpaceMismatch { left: f.space(), right: Space::OnV });
    }
    let nvars = f.nvars();
    let n = nvars * (nvars + 1) / 2;
    if points.len() != n {
        return Err(Error::PointCount { want: n, got: points.len() });
    }
    check_points(points, nvars)?;
    if !is_nondegenerate(f)? {
        return Err(Error::DegenerateForm);
    }

    // Squares of the linear forms; refuse dependent squares since the dual
    // quadrics are then not characterized by the delta property.
    let squares: Vec<Form> = points
        .iter()
        .map(|p| power_of_linear(p, 2))
        .collect::<Result<_>>()?;
    let quad_basis = monomials_of_degree(nvars, 2);
    let square_matrix = RatMatrix::from_fn(quad_basis.len(), n, |r, c| {
        squares[c].coefficient(&quad_basis[r])
    });
    if square_matrix.rank() < n {
        return Err(Error::DependentSquares);
    }

    let dual_quadrics: Vec<Form> = squares
        .iter()
        .map(|sq| apolar_inverse_apply(f, sq))
        .collect::<Result<_>>()?;

    let eval_matrix = RatMatrix::from_fn(n, n, |i, j| {
        dual_quadrics[j].evaluate(&points[i]).expect("checked dimensions")
    });
    let delta_ok = (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                !eval_matrix.at(i, j).is_zero()
            } else {
                eval_matrix.at(i, j).is_zero()
            }
        })
    });

    let (alphas, zero_alphas) = match solve_alphas(f, points, 4)? {
        AlphaSolution::Unique { alphas, zero_indices } => (Some(alphas), zero_indices),
        _ => (None, Vec::new()),
    };
    let alphas_ok = alphas.is_some() && zero_alphas.is_empty();

    let annihilator = annihilator_forms(points, 4)?;
    let annihilator_dim = annihilator.len();
    let annihilator_ok = annihilator
        .iter()
        .map(|g| pairing(g, f))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(Zero::is_zero);

    let agree = delta_ok == alphas_ok && alphas_ok == annihilator_ok;
    Ok(MukaiCertificate {
        eval_matrix,
        delta_ok,
        alphas,
        zero_alphas,
        annihilator_dim,
        annihilator_ok,
        agree,
        dual_quadrics,
    })
}

/// A deterministic planted instance: `n = nvars(nvars+1)/2` random points
/// with nonzero coefficients and the quartic they build.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub form: Form,
    pub points: Vec<PointVec>,
    pub alphas: Vec<BigRational>,
    pub nondegenerate: bool,
    pub squares_independent: bool,
    pub attempts: u32,
}

const PLANT_MAX_ATTEMPTS: u32 = 32;

/// Draw a tight planted instance: the quartic is non-degenerate and the
/// squares of the points are linearly independent. Retries with fresh
/// sub-seeds a bounded number of times.
pub fn planted_instance(seed: u64, nvars: usize, spread: u32) -> Result<PlantedInstance> {
    if nvars < 2 {
        return Err(Error::TooFewVariables { want: 2, got: nvars });
    }
    if spread == 0 {
        return Err(Error::RetriesExhausted(0));
    }
    let n = nvars * (nvars + 1) / 2;
    for attempt in 0..PLANT_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(attempt));
        let Some(points) = draw_points(&mut rng, nvars, n, spread) else {
            continue;
        };
        let alphas: Vec<BigRational> = (0..n)
            .map(|_| loop {
                let v = draw_rational(&mut rng, spread);
                if !v.is_zero() {
                    break v;
                }
            })
            .collect();
        let mut form = Form::zero(Space::OnV, nvars, 4);
        for (p, a) in points.iter().zip(&alphas) {
            form = form.add(&power_of_linear(p, 4)?.scale(a))?;
        }
        let nondegenerate = is_nondegenerate(&form)?;
        let quad_basis = monomials_of_degree(nvars, 2);
        let squares: Vec<Form> = points
            .iter()
            .map(|p| power_of_linear(p, 2))
            .collect::<Result<_>>()?;
        let square_matrix = RatMatrix::from_fn(quad_basis.len(), n, |r, c| {
            squares[c].coefficient(&quad_basis[r])
        });
        let squares_independent = square_matrix.rank() == n;
        if nondegenerate && squares_independent {
            return Ok(PlantedInstance {
                form,
                points,
                alphas,
                nondegenerate,
                squares_independent,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::RetriesExhausted(PLANT_MAX_ATTEMPTS))
}

fn draw_rational(rng: &mut ChaCha8Rng, spread: u32) -> BigRational {
    let s = i64::from(spread);
    let numer = rng.gen_range(-s..=s);
    let denom = rng.gen_range(1..=s);
    BigRational::new(numer.into(), denom.into())
}

fn draw_points(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    n: usize,
    spread: u32,
) -> Option<Vec<PointVec>> {
    let mut points: Vec<PointVec> = Vec::with_capacity(n);
    'outer: for _ in 0..n {
        for _ in 0..64 {
            let p = PointVec::new(
                Role::InDual,
                (0..nvars).map(|_| draw_rational(rng, spread)).collect(),
            );
            if p.is_zero() {
                continue;
            }
            let p = p.normalize_projective().ok()?;
            if points.iter().all(|q| q.coords() != p.coords()) {
                points.push(p);
                continue 'outer;
            }
        }
        return None;
    }
    Some(points)
}

/// Replace one point of a planted instance by a fresh random point,
/// keeping the quartic; the result generically fails membership. The
/// replacement is redrawn until the points stay projectively distinct and
/// their squares stay independent (preconditions of the membership test).
pub fn perturb_instance(instance: &PlantedInstance, seed: u64) -> Result<Vec<PointVec>> {
    let nvars = instance.points[0].nvars();
    let n = instance.points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let victim = rng.gen_range(0..n);
    for _ in 0..PLANT_MAX_ATTEMPTS {
        let p = PointVec::new(Role::InDual, (0..nvars).map(|_| draw_rational(&mut rng, 4)).collect());
        if p.is_zero() {
            continue;
        }
        let p = p.normalize_projective()?;
        let mut points = instance.points.clone();
        if points.iter().any(|q| q.coords() == p.coords()) {
            continue;
        }
        points[victim] = p;
        let quad_basis = monomials_of_degree(nvars, 2);
        let squares: Vec<Form> = points
            .iter()
            .map(|q| power_of_linear(q, 2))
            .collect::<Result<_>>()?;
        let square_matrix = RatMatrix::from_fn(quad_basis.len(), n, |r, c| {
            squares[c].coefficient(&quad_basis[r])
        });
        if square_matrix.rank() == n {
            return Ok(points);
        }
    }
    Err(Error::RetriesExhausted(PLANT_MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::MultiIndex;
    use crate::Error;
    use crate::polarity::mixed_polar;
    use crate::test_support::fermat_plus;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn point(coords: &[i64]) -> PointVec {
        PointVec::from_integers(Role::InDual, coords)
    }

    #[test]
    fn powers_of_linear_forms() {
        assert_eq!(
            power_of_linear(&point(&[1, 0]), 4).unwrap(),
            Form::monomial(Space::OnV, 2, mi(&[4, 0]), rat(1)).unwrap()
        );
        let square = power_of_linear(&point(&[1, 1]), 2).unwrap();
        let expect = Form::from_terms(
            Space::OnV,
            2,
            2,
            [(mi(&[2, 0]), rat(1)), (mi(&[1, 1]), rat(2)), (mi(&[0, 2]), rat(1))],
        )
        .unwrap();
        assert_eq!(square, expect);
        // binomial oracle: (x0 + 2 x1)^3
        let cube = power_of_linear(&point(&[1, 2]), 3).unwrap();
        let expect = Form::from_terms(
            Space::OnV,
            2,
            3,
            [
                (mi(&[3, 0]), rat(1)),
                (mi(&[2, 1]), rat(6)),
                (mi(&[1, 2]), rat(12)),
                (mi(&[0, 3]), rat(8)),
            ],
        )
        .unwrap();
        assert_eq!(cube, expect);
        assert!(matches!(
            power_of_linear(&point(&[0, 0]), 3),
            Err(Error::ZeroLinearForm)
        ));
    }

    #[test]
    fn representation_normalizes_and_sorts() {
        let rep = Representation::new(
            4,
            vec![
                (point(&[0, 2]), rat(1)),
                (point(&[3, 3]), rat(2)),
            ],
        )
        .unwrap();
        // (0,2) normalizes to (0,1) with alpha 16; (3,3) to (1,1) with alpha 162
        assert_eq!(rep.entries()[0].point.coords(), point(&[0, 1]).coords());
        assert_eq!(rep.entries()[0].alpha, rat(16));
        assert_eq!(rep.entries()[1].point.coords(), point(&[1, 1]).coords());
        assert_eq!(rep.entries()[1].alpha, rat(162));
    }

    #[test]
    fn verify_direct_sums() {
        let fermat = Form::from_terms(
            Space::OnV,
            2,
            4,
            [(mi(&[4, 0]), rat(1)), (mi(&[0, 4]), rat(1))],
        )
        .unwrap();
        let rep = Representation::new(
            4,
            vec![(point(&[1, 0]), rat(1)), (point(&[0, 1]), rat(1))],
        )
        .unwrap();
        assert!(verify_representation(&fermat, &rep).unwrap());

        let rep3 = Representation::new(
            4,
            vec![
                (point(&[1, 0]), rat(1)),
                (point(&[0, 1]), rat(1)),
                (point(&[1, 1]), rat(1)),
            ],
        )
        .unwrap();
        assert!(verify_representation(&fermat_plus(), &rep3).unwrap());
        assert!(!verify_representation(&fermat, &rep3).unwrap());
    }

    #[test]
    fn single_power_cannot_match_rank_two() {
        // x0 x1 has rank 2; no single-term representation works
        let f = Form::monomial(Space::OnV, 2, mi(&[1, 1]), rat(1)).unwrap();
        for coords in [[1i64, 1], [1, -1], [2, 1], [1, 0]] {
            let rep = Representation::new(2, vec![(point(&coords), rat(1))]).unwrap();
            assert!(!verify_representation(&f, &rep).unwrap());
        }
    }

    #[test]
    fn scaling_covariance_of_verification() {
        let f = fermat_plus();
        // scale each point by c and alpha by 1/c^4
        let rep = Representation::new(
            4,
            vec![
                (point(&[2, 0]), BigRational::new(1.into(), 16.into())),
                (point(&[0, -3]), BigRational::new(1.into(), 81.into())),
                (point(&[5, 5]), BigRational::new(1.into(), 625.into())),
            ],
        )
        .unwrap();
        assert!(verify_representation(&f, &rep).unwrap());
    }

    #[test]
    fn solve_alphas_planted_and_identity() {
        let f = fermat_plus();
        let pts = [point(&[1, 0]), point(&[0, 1]), point(&[1, 1])];
        match solve_alphas(&f, &pts, 4).unwrap() {
            AlphaSolution::Unique { alphas, zero_indices } => {
                assert_eq!(alphas, vec![rat(1), rat(1), rat(1)]);
                assert!(zero_indices.is_empty());
            }
            other => panic!("expected unique solution, got {other:?}"),
        }
        // n = 1: F = H^4
        let h = point(&[1, 2]);
        let f1 = power_of_linear(&h, 4).unwrap();
        match solve_alphas(&f1, &[h], 4).unwrap() {
            AlphaSolution::Unique { alphas, .. } => assert_eq!(alphas, vec![rat(1)]),
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn solve_alphas_rejects_duplicates_and_detects_nonmembership() {
        let f = fermat_plus();
        let dup = [point(&[1, 0]), point(&[2, 0]), point(&[0, 1])];
        assert!(matches!(
            solve_alphas(&f, &dup, 4),
            Err(Error::DuplicatePoints(0, 1))
        ));
        let off = [point(&[1, 0]), point(&[0, 1]), point(&[1, 2])];
        assert_eq!(solve_alphas(&f, &off, 4).unwrap(), AlphaSolution::NoSolution);
    }

    #[test]
    fn generic_points_span_nothing_new() {
        // n < dim S^4 random points: a random quartic is outside the span
        let mut hits = 0;
        for seed in 0..100u64 {
            let inst = planted_instance(seed, 2, 4).unwrap();
            let f = crate::form::random_form(seed.wrapping_add(10_000), 2, 4, 9);
            if f.is_zero() {
                continue;
            }
            let pts = &inst.points[..2];
            match solve_alphas(&f, pts, 4).unwrap() {
                AlphaSolution::NoSolution => hits += 1,
                _ => {}
            }
        }
        assert!(hits >= 99, "only {hits}/100 were outside the span");
    }

    #[test]
    fn annihilator_of_two_basis_points() {
        let pts = [point(&[1, 0]), point(&[0, 1])];
        let basis = annihilator_forms(&pts, 4).unwrap();
        assert_eq!(basis.len(), 3);
        for g in &basis {
            assert_eq!(g.space(), Space::OnDual);
            for p in &pts {
                assert_eq!(g.evaluate(p).unwrap(), rat(0));
            }
        }
        // no points: full monomial basis
        let all = annihilator_forms_on(Space::OnDual, 2, &[], 4).unwrap();
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn annihilator_of_generic_full_set_is_trivial() {
        let mut hits = 0;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(97).wrapping_add(5));
            let Some(points) = draw_points(&mut rng, 2, 5, 6) else { continue };
            if annihilator_forms(&points, 4).unwrap().is_empty() {
                hits += 1;
            }
        }
        assert!(hits >= 99, "only {hits}/100 full generic sets had trivial annihilator");
    }

    #[test]
    fn mukai_planted_tight_binary_instance() {
        let f = fermat_plus();
        let pts = [point(&[1, 0]), point(&[0, 1]), point(&[1, 1])];
        let cert = mukai_conditions(&f, &pts).unwrap();
        assert!(cert.delta_ok);
        assert!(cert.alphas_ok());
        assert!(cert.annihilator_ok);
        assert!(cert.agree);
        assert_eq!(cert.alphas.as_deref().unwrap(), &[rat(1), rat(1), rat(1)]);
        assert_eq!(cert.eval_matrix, RatMatrix::identity(3));
        // cross-path: differential mixed polar of each solved quadric is the square
        for (j, d) in cert.dual_quadrics.iter().enumerate() {
            let square = power_of_linear(&pts[j], 2).unwrap();
            assert_eq!(mixed_polar(&f, d).unwrap(), square);
        }
    }

    #[test]
    fn mukai_perturbed_binary_instance_fails_all_routes() {
        let f = fermat_plus();
        let pts = [point(&[1, 0]), point(&[0, 1]), point(&[1, 2])];
        let cert = mukai_conditions(&f, &pts).unwrap();
        assert!(!cert.delta_ok);
        assert!(!cert.alphas_ok());
        assert!(cert.alphas.is_none());
        assert!(!cert.annihilator_ok);
        assert!(cert.agree);
    }

    #[test]
    fn mukai_guards() {
        let f = fermat_plus();
        assert!(matches!(
            mukai_conditions(&f, &[point(&[1, 0]), point(&[0, 1])]),
            Err(Error::PointCount { want: 3, got: 2 })
        ));
        let fermat = Form::from_terms(
            Space::OnV,
            2,
            4,
            [(mi(&[4, 0]), rat(1)), (mi(&[0, 4]), rat(1))],
        )
        .unwrap();
        assert!(matches!(
            mukai_conditions(&fermat, &[point(&[1, 0]), point(&[0, 1]), point(&[1, 1])]),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn mukai_ternary_planted_instance() {
        // shape check: 3 variables need n = 6 points
        let inst = planted_instance(1, 3, 3).unwrap();
        assert_eq!(inst.points.len(), 6);
        let cert = mukai_conditions(&inst.form, &inst.points).unwrap();
        assert!(cert.agree);
        assert!(cert.delta_ok);
        assert!(cert.annihilator_ok);
        // planted coefficients come back exactly, in the planted order
        assert_eq!(cert.alphas.as_deref().unwrap(), &inst.alphas[..]);
        // diagonal entries are the reciprocals of the planted alphas
        for (i, a) in inst.alphas.iter().enumerate() {
            assert_eq!(cert.eval_matrix.at(i, i), &a.recip());
        }
    }

    #[test]
    fn planted_instances_verify_and_are_deterministic() {
        for seed in [0u64, 7, 123] {
            let a = planted_instance(seed, 2, 4).unwrap();
            let b = planted_instance(seed, 2, 4).unwrap();
            assert_eq!(a.form, b.form);
            assert_eq!(a.points, b.points);
            assert_eq!(a.alphas, b.alphas);
            let rep = Representation::new(
                4,
                a.points.iter().cloned().zip(a.alphas.iter().cloned()).collect(),
            )
            .unwrap();
            assert!(verify_representation(&a.form, &rep).unwrap());
            assert!(a.nondegenerate && a.squares_independent);
        }
    }

    #[test]
    fn planted_ternary_instances_are_generically_tight_on_first_draw() {
        let mut first_draw = 0;
        for seed in 0..100u64 {
            let inst = planted_instance(seed, 3, 4).unwrap();
            if inst.attempts == 1 {
                first_draw += 1;
            }
        }
        assert!(first_draw >= 95, "only {first_draw}/100 tight on first draw");
    }

    #[test]
    fn eval_matrix_zero_pattern_is_scale_invariant() {
        let inst = planted_instance(11, 2, 4).unwrap();
        let cert = mukai_conditions(&inst.form, &inst.points).unwrap();
        let scaled: Vec<PointVec> = inst
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| p.scale(&BigRational::new((i as i64 + 2).into(), 3.into())))
            .collect();
        let cert2 = mukai_conditions(&inst.form, &scaled).unwrap();
        assert_eq!(cert.delta_ok, cert2.delta_ok);
        assert_eq!(cert.annihilator_ok, cert2.annihilator_ok);
        assert_eq!(cert.agree, cert2.agree);
        for i in 0..inst.points.len() {
            for j in 0..inst.points.len() {
                assert_eq!(
                    cert.eval_matrix.at(i, j).is_zero(),
                    cert2.eval_matrix.at(i, j).is_zero()
                );
            }
        }
    }
}
