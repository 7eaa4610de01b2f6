//! Colength of an ideal of `C{x, y}` through truncation at `m^N`.
//!
//! For each order `N` the quotient `C[x,y] / (I + m^N)` is spanned by the
//! monomials of degree `< N`; the ideal part is spanned by the truncated
//! products `x^a y^b g`. Its dimension `d_N` is non-decreasing in `N`, and
//! `d_N = d_{N+1}` forces `m^N ⊂ I` (Nakayama), so the first repeat is the
//! local colength.

use serde::Serialize;

use super::field::{PrimeField, Rationals, ScalarDomain, ScalarField};
use super::poly::LocalPolynomial;
use super::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColengthResult {
    pub value: usize,
    /// Order `N` at which `d_N = d_{N+1}` was first observed.
    pub truncation_order: usize,
    pub stabilized: bool,
    /// `(N, d_N)` for every order evaluated.
    pub history: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColengthOptions {
    pub start_order: usize,
    pub max_order: usize,
    pub domain: ScalarDomain,
}

impl ColengthOptions {
    /// Orders suited to germs with initial term `y^n - x^m`: start at
    /// `max(n, m) + 2`, give up past `max(mu + 3, start + 1)`.
    pub fn for_weights(n: u32, m: u32, domain: ScalarDomain) -> Self {
        let start = n.max(m) as usize + 2;
        let mu = (n as usize - 1) * (m as usize - 1);
        Self {
            start_order: start,
            max_order: (mu + 3).max(start + 1),
            domain,
        }
    }

    /// Orders for an arbitrary germ: start at 1, cap at `max_order`.
    pub fn general(max_order: usize, domain: ScalarDomain) -> Self {
        Self {
            start_order: 1,
            max_order,
            domain,
        }
    }
}

/// Index of `x^i y^j` among the monomials of degree `< N`, graded by degree
/// and, inside a degree, by decreasing power of `x`.
fn monomial_index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn monomial_count(order: usize) -> usize {
    order * (order + 1) / 2
}

/// Generators with coefficients mapped into the field, as `(i, j, c)` lists.
type FieldGens<E> = Vec<Vec<(usize, usize, E)>>;

fn map_generators<F: ScalarField>(
    field: &F,
    generators: &[LocalPolynomial],
    modulus: Option<u64>,
) -> Result<FieldGens<F::Elem>, OracleError> {
    generators
        .iter()
        .map(|g| {
            g.terms()
                .map(|(&(i, j), c)| {
                    field
                        .from_rational(c)
                        .map(|e| (i as usize, j as usize, e))
                        .ok_or(OracleError::UnreducibleCoefficient {
                            prime: modulus.unwrap_or(0),
                        })
                })
                .filter(|r| !matches!(r, Ok((_, _, e)) if field.is_zero(e)))
                .collect()
        })
        .collect()
}

type SparseRow<E> = Vec<(usize, E)>;

/// Echelon form of the span of `x^a y^b g` truncated below degree `order`,
/// pivoting on the lowest column. Returns the sorted pivot columns.
///
/// Columns are graded by degree, so projecting onto the monomials of degree
/// `< N` keeps exactly the rows whose pivot lies there: one elimination at
/// `order` yields the rank at every smaller truncation.
fn pivot_columns<F: ScalarField>(field: &F, gens: &FieldGens<F::Elem>, order: usize) -> Vec<usize> {
    let ncols = monomial_count(order);
    let mut pivots: Vec<Option<SparseRow<F::Elem>>> = vec![None; ncols];
    let mut found = 0;
    'outer: for g in gens {
        let Some(g_order) = g.iter().map(|(i, j, _)| i + j).min() else {
            continue;
        };
        for shift_deg in 0..order.saturating_sub(g_order) {
            for b in 0..=shift_deg {
                let a = shift_deg - b;
                let mut row: SparseRow<F::Elem> = g
                    .iter()
                    .filter(|(i, j, _)| a + i + b + j < order)
                    .map(|(i, j, c)| (monomial_index(a + i, b + j), c.clone()))
                    .collect();
                row.sort_unstable_by_key(|e| e.0);
                if reduce_into(field, row, &mut pivots) {
                    found += 1;
                    if found == ncols {
                        break 'outer;
                    }
                }
            }
        }
    }
    pivots
        .iter()
        .enumerate()
        .filter_map(|(c, p)| p.as_ref().map(|_| c))
        .collect()
}

/// `row - factor * pivot`, both sorted by column.
fn axpy<F: ScalarField>(
    field: &F,
    row: &[(usize, F::Elem)],
    factor: &F::Elem,
    pivot: &[(usize, F::Elem)],
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut k) = (0, 0);
    let zero = field.zero();
    while i < row.len() || k < pivot.len() {
        let (col, v) = if k == pivot.len() || (i < row.len() && row[i].0 < pivot[k].0) {
            i += 1;
            (row[i - 1].0, row[i - 1].1.clone())
        } else if i == row.len() || pivot[k].0 < row[i].0 {
            k += 1;
            (pivot[k - 1].0, field.sub_mul(&zero, factor, &pivot[k - 1].1))
        } else {
            i += 1;
            k += 1;
            (row[i - 1].0, field.sub_mul(&row[i - 1].1, factor, &pivot[k - 1].1))
        };
        if !field.is_zero(&v) {
            out.push((col, v));
        }
    }
    out
}

/// Reduces `row` against the echelon rows and stores what survives as a new
/// pivot row. Returns whether the rank grew.
fn reduce_into<F: ScalarField>(
    field: &F,
    mut row: SparseRow<F::Elem>,
    pivots: &mut [Option<SparseRow<F::Elem>>],
) -> bool {
    loop {
        let Some((lead, coeff)) = row.first().cloned() else {
            return false;
        };
        match &pivots[lead] {
            Some(p) => row = axpy(field, &row, &coeff, p),
            None => {
                let inv = field.inv(&coeff);
                pivots[lead] = Some(row.into_iter().map(|(c, e)| (c, field.mul(&e, &inv))).collect());
                return true;
            }
        }
    }
}

fn colength_in<F: ScalarField>(
    field: &F,
    gens: &FieldGens<F::Elem>,
    opts: &ColengthOptions,
) -> Result<ColengthResult, OracleError> {
    let start = opts.start_order.max(1);
    let max_order = opts.max_order.max(start);
    let mut span = 4;
    loop {
        let top = (start + span).min(max_order);
        let cols = pivot_columns(field, gens, top);
        let dim = |n: usize| {
            let limit = monomial_count(n);
            limit - cols.partition_point(|&c| c < limit)
        };
        let mut history = vec![(start, dim(start))];
        for order in start + 1..=top {
            let d = dim(order);
            let prev = history.last().expect("non-empty").1;
            history.push((order, d));
            if d == prev {
                return Ok(ColengthResult {
                    value: d,
                    truncation_order: order - 1,
                    stabilized: true,
                    history,
                });
            }
        }
        if top == max_order {
            return Err(OracleError::NoStabilization { max_order, history });
        }
        span *= 2;
    }
}

/// `dim C{x, y} / (generators)` over the requested scalar domain.
pub fn local_colength(
    generators: &[LocalPolynomial],
    opts: &ColengthOptions,
) -> Result<ColengthResult, OracleError> {
    if generators.iter().any(|g| !g.vanishes_at_origin()) {
        // a unit generates the whole ring
        return Ok(ColengthResult {
            value: 0,
            truncation_order: 0,
            stabilized: true,
            history: Vec::new(),
        });
    }
    match opts.domain {
        ScalarDomain::Rational => {
            let gens = map_generators(&Rationals, generators, None)?;
            colength_in(&Rationals, &gens, opts)
        }
        ScalarDomain::PrimeField(p) => {
            let field = PrimeField::new(p).ok_or(OracleError::NotPrime(p))?;
            let gens = map_generators(&field, generators, Some(p))?;
            colength_in(&field, &gens, opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::poly::Variable;

    fn domains() -> [ScalarDomain; 2] {
        [ScalarDomain::Rational, ScalarDomain::random_prime(7)]
    }

    #[test]
    fn monomial_indexing_is_dense() {
        let mut seen = vec![false; monomial_count(6)];
        for d in 0..6 {
            for j in 0..=d {
                seen[monomial_index(d - j, j)] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn cusp_jacobian() {
        let gens = [
            LocalPolynomial::new().with_term(2, 0, -3),
            LocalPolynomial::new().with_term(0, 1, 2),
        ];
        for domain in domains() {
            let res = local_colength(&gens, &ColengthOptions::general(20, domain)).unwrap();
            assert_eq!(res.value, 2);
            assert!(res.stabilized);
        }
    }

    #[test]
    fn cusp_tjurina() {
        let f = LocalPolynomial::initial_term(2, 3);
        let gens = [f.clone(), f.partial_derivative(Variable::X), f.partial_derivative(Variable::Y)];
        let res = local_colength(&gens, &ColengthOptions::general(20, ScalarDomain::Rational)).unwrap();
        assert_eq!(res.value, 2);
    }

    #[test]
    fn e6_jacobian_of_y4_x5() {
        let f = LocalPolynomial::initial_term(4, 5);
        let gens = [f.partial_derivative(Variable::X), f.partial_derivative(Variable::Y)];
        for domain in domains() {
            let res = local_colength(&gens, &ColengthOptions::for_weights(4, 5, domain)).unwrap();
            assert_eq!(res.value, 12);
        }
    }

    #[test]
    fn history_is_non_decreasing() {
        let f = LocalPolynomial::initial_term(3, 7).with_term(5, 1, 1);
        let gens = [f.partial_derivative(Variable::X), f.partial_derivative(Variable::Y)];
        let res = local_colength(&gens, &ColengthOptions::general(30, ScalarDomain::Rational)).unwrap();
        assert!(res.history.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(res.value, 12);
    }

    #[test]
    fn non_isolated_does_not_stabilize() {
        // y^2 has a line of singular points
        let f = LocalPolynomial::new().with_term(0, 2, 1);
        let gens = [f.partial_derivative(Variable::X), f.partial_derivative(Variable::Y)];
        let err = local_colength(&gens, &ColengthOptions::general(8, ScalarDomain::Rational)).unwrap_err();
        assert!(matches!(err, OracleError::NoStabilization { max_order: 8, .. }));
    }

    #[test]
    fn unit_generator_gives_zero() {
        let gens = [LocalPolynomial::new().with_term(0, 0, 1)];
        let res = local_colength(&gens, &ColengthOptions::general(4, ScalarDomain::Rational)).unwrap();
        assert_eq!(res.value, 0);
    }
}
