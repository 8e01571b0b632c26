//! Derivative calculus for boundary-space operator functions.
//!
//! Trace identities and decay estimates need high-order lambda-derivatives of
//! operator-valued functions built from the gamma field `gamma(lambda)`, its
//! adjoint, the Weyl function `M(lambda)`, and resolvents of the reference
//! (Neumann) restriction `A_0`.  In finite dimensions all of these have exact
//! closed forms driven by `R = (A_0 - lambda)^{-1}`:
//!
//! ```text
//! gamma^(k)      = k! R^k gamma
//! (gamma^*)^(k)  = k! gamma^* R^k
//! M^(k)          = k! gamma^* R^{k-1} gamma          (k >= 1)
//! (R^1)^(k)      = k! R^{k+1}
//! ```
//!
//! Everything else is assembled structurally: products by the multinomial
//! Leibniz rule, inverses by the standard recursion
//! `(E^{-1})^(k) = -E^{-1} sum_j C(k,j) E^(j) (E^{-1})^(k-j)`, sums linearly.
//!
//! [`EvalContext`] evaluates an [`OperatorExpr`] and its derivatives either
//! from a full model (triple + reference realization) or from a precomputed
//! stack of Weyl-function derivatives alone ("boundary-only"), which is what
//! the per-mode decay ladder uses.  [`fd_derivative`] provides an independent
//! finite-difference oracle for cross-checking the closed forms.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{c64, inverse, CMatrix, Complex64};
use crate::triple::{format_lambda, QuasiTriple, Realization};

/// Highest derivative order the calculus will attempt.
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// Exact factorials up to [`MAX_DERIVATIVE_ORDER`].
const FACT: [f64; MAX_DERIVATIVE_ORDER + 1] =
    [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0];

fn check_order(k: usize) -> Result<()> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(Error::DepthExceeded {
            order: k,
            max: MAX_DERIVATIVE_ORDER,
        });
    }
    Ok(())
}

/// Symbolic operator-valued function of the spectral parameter.
#[derive(Debug, Clone)]
pub enum OperatorExpr {
    /// A lambda-independent matrix (boundary operators, identities).
    Const(CMatrix),
    /// The gamma field `gamma(lambda) : G -> H`.
    Gamma,
    /// The adjoint gamma field `gamma(conj lambda)^* : H -> G`.
    GammaStar,
    /// The Weyl function `M(lambda) : G -> G`.
    Weyl,
    /// A fixed derivative `M^(j)(lambda)` as a leaf of its own; its k-th
    /// derivative is `M^(j+k)`.  `WeylDeriv(0)` is `Weyl` itself.
    WeylDeriv(usize),
    /// The reference resolvent `(A_0 - lambda)^{-1} : H -> H`.
    Resolvent,
    /// Pointwise inverse of the operand.
    Inverse(Box<OperatorExpr>),
    /// Operator product, left to right.
    Product(Vec<OperatorExpr>),
    /// Linear combination with fixed complex coefficients.
    Sum(Vec<(Complex64, OperatorExpr)>),
}

impl OperatorExpr {
    /// `M(lambda)^{-1} gamma(conj lambda)^*` — maps interior data to the
    /// Neumann boundary values of the induced Dirichlet problem.
    pub fn composite_s() -> OperatorExpr {
        OperatorExpr::Product(vec![
            OperatorExpr::Inverse(Box::new(OperatorExpr::Weyl)),
            OperatorExpr::GammaStar,
        ])
    }

    /// `(I - B M(lambda))^{-1}` for a boundary operator `B`.
    pub fn composite_t(b: &CMatrix) -> OperatorExpr {
        let n = b.rows();
        OperatorExpr::Inverse(Box::new(OperatorExpr::Sum(vec![
            (c64(1.0, 0.0), OperatorExpr::Const(CMatrix::identity(n))),
            (
                c64(-1.0, 0.0),
                OperatorExpr::Product(vec![OperatorExpr::Const(b.clone()), OperatorExpr::Weyl]),
            ),
        ])))
    }

    /// `(I - B M(lambda))^{-1} B` — the Robin-to-Neumann middle factor.
    pub fn composite_u(b: &CMatrix) -> OperatorExpr {
        OperatorExpr::Product(vec![
            OperatorExpr::composite_t(b),
            OperatorExpr::Const(b.clone()),
        ])
    }

    /// `(I - B M(lambda))^{-1} M(lambda)^{-1}` — the Robin-to-Dirichlet middle
    /// factor.  The factor order matters when `B` does not commute with
    /// `M(lambda)`: this is the form that telescopes as `U + M^{-1}`, i.e.
    /// `composite_u(b)` plus the Dirichlet-to-Neumann middle.
    pub fn composite_v(b: &CMatrix) -> OperatorExpr {
        OperatorExpr::Product(vec![
            OperatorExpr::composite_t(b),
            OperatorExpr::Inverse(Box::new(OperatorExpr::Weyl)),
        ])
    }

    /// `gamma(conj lambda)^* gamma(lambda)`, which equals `M'(lambda)`
    /// identically — the factored form used when interior data is available.
    pub fn weyl_prime() -> OperatorExpr {
        OperatorExpr::Product(vec![OperatorExpr::GammaStar, OperatorExpr::Gamma])
    }
}

/// Multinomial Leibniz expansion: all ways to distribute `order` derivatives
/// over `arity` factors, with multiplicities.
///
/// Returns `(coefficient, orders)` pairs where `orders.len() == arity`,
/// `orders` sums to `order`, and `coefficient = order! / prod(orders[i]!)`.
/// The coefficients sum to `arity^order`.
pub fn leibniz_expand(order: usize, arity: usize) -> Result<Vec<(u64, Vec<usize>)>> {
    check_order(order)?;
    if arity == 0 {
        return Err(Error::EmptySequence {
            op: "leibniz_expand",
        });
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; arity];
    fill_compositions(order, 0, &mut current, &mut out);
    Ok(out)
}

fn fill_compositions(
    remaining: usize,
    idx: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<(u64, Vec<usize>)>,
) {
    if idx == current.len() - 1 {
        current[idx] = remaining;
        let coeff = multinomial(current);
        out.push((coeff, current.clone()));
        return;
    }
    for take in (0..=remaining).rev() {
        current[idx] = take;
        fill_compositions(remaining - take, idx + 1, current, out);
    }
}

fn multinomial(orders: &[usize]) -> u64 {
    let total: usize = orders.iter().sum();
    let mut v = FACT[total];
    for &o in orders {
        v /= FACT[o];
    }
    v.round() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum LeafKey {
    Gamma,
    GammaStar,
    ResolventPow(usize),
    WeylDeriv(usize),
}

enum Source<'a> {
    Full {
        triple: &'a QuasiTriple,
        reference: &'a Realization,
    },
    Boundary {
        lambda: Complex64,
        weyl_derivs: Vec<CMatrix>,
    },
}

/// Evaluator for [`OperatorExpr`] trees and their lambda-derivatives.
pub struct EvalContext<'a> {
    source: Source<'a>,
    cache: RefCell<HashMap<(u64, u64, LeafKey), CMatrix>>,
}

impl<'a> EvalContext<'a> {
    /// Context backed by a full model: the triple supplies gamma-field and
    /// Weyl-function values, `reference` must be the Neumann restriction
    /// (kernel of the conormal trace), whose resolvent drives every closed
    /// form.
    pub fn full(triple: &'a QuasiTriple, reference: &'a Realization) -> Self {
        EvalContext {
            source: Source::Full { triple, reference },
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Context holding only precomputed Weyl-function derivatives
    /// `[M(lambda), M'(lambda), ..]` at a single fixed point.  Expressions
    /// containing `Gamma`, `GammaStar`, or `Resolvent` leaves are rejected;
    /// `Weyl` and `WeylDeriv` leaves are served from the stack.
    pub fn boundary_only(lambda: Complex64, weyl_derivs: Vec<CMatrix>) -> Result<Self> {
        if weyl_derivs.is_empty() {
            return Err(Error::EmptySequence {
                op: "EvalContext::boundary_only",
            });
        }
        Ok(EvalContext {
            source: Source::Boundary {
                lambda,
                weyl_derivs,
            },
            cache: RefCell::new(HashMap::new()),
        })
    }

    /// Evaluate the expression at `lambda` (derivative order zero).
    pub fn evaluate(&self, expr: &OperatorExpr, lambda: Complex64) -> Result<CMatrix> {
        self.derivative(expr, 0, lambda)
    }

    /// `k`-th lambda-derivative of the expression at `lambda`.
    pub fn derivative(&self, expr: &OperatorExpr, k: usize, lambda: Complex64) -> Result<CMatrix> {
        check_order(k)?;
        if let Source::Boundary { lambda: bound, .. } = &self.source {
            if (bound - lambda).norm() > 0.0 {
                return Err(Error::DimensionMismatch {
                    op: "EvalContext::derivative",
                    detail: format!(
                        "boundary-only context is bound to lambda = {}, asked at {}",
                        format_lambda(*bound),
                        format_lambda(lambda)
                    ),
                });
            }
        }
        self.deriv_inner(expr, k, lambda)
    }

    fn deriv_inner(&self, expr: &OperatorExpr, k: usize, lambda: Complex64) -> Result<CMatrix> {
        match expr {
            OperatorExpr::Const(c) => {
                if k == 0 {
                    Ok(c.clone())
                } else {
                    Ok(CMatrix::zeros(c.rows(), c.cols()))
                }
            }
            OperatorExpr::Gamma => {
                let gamma = self.leaf(LeafKey::Gamma, lambda)?;
                if k == 0 {
                    return Ok(gamma);
                }
                // gamma^(k) = k! R^k gamma
                let rk = self.leaf(LeafKey::ResolventPow(k), lambda)?;
                Ok(rk.mul(&gamma)?.scale(c64(FACT[k], 0.0)))
            }
            OperatorExpr::GammaStar => {
                let gs = self.leaf(LeafKey::GammaStar, lambda)?;
                if k == 0 {
                    return Ok(gs);
                }
                // (gamma^*)^(k) = k! gamma^* R^k
                let rk = self.leaf(LeafKey::ResolventPow(k), lambda)?;
                Ok(gs.mul(&rk)?.scale(c64(FACT[k], 0.0)))
            }
            OperatorExpr::Weyl => self.weyl_derivative(k, lambda),
            OperatorExpr::WeylDeriv(j) => {
                check_order(j + k)?;
                self.weyl_derivative(j + k, lambda)
            }
            OperatorExpr::Resolvent => {
                // (R)^(k) = k! R^{k+1}
                check_order(k + 1)?;
                let r = self.leaf(LeafKey::ResolventPow(k + 1), lambda)?;
                Ok(r.scale(c64(FACT[k], 0.0)))
            }
            OperatorExpr::Inverse(inner) => {
                // Iterative ladder: (E^{-1})^(0..k) from E^(0..k).
                let e0 = self.deriv_inner(inner, 0, lambda)?;
                let inv0 = inverse(&e0).map_err(|e| match e {
                    Error::Singular { .. } => Error::SingularInverse {
                        lambda: format_lambda(lambda),
                    },
                    other => other,
                })?;
                if k == 0 {
                    return Ok(inv0);
                }
                let mut inner_derivs = Vec::with_capacity(k + 1);
                inner_derivs.push(e0);
                for j in 1..=k {
                    inner_derivs.push(self.deriv_inner(inner, j, lambda)?);
                }
                let n = inv0.rows();
                let mut inv_derivs = vec![inv0.clone()];
                for kk in 1..=k {
                    let mut acc = CMatrix::zeros(n, n);
                    for j in 1..=kk {
                        let c = FACT[kk] / (FACT[j] * FACT[kk - j]);
                        let term = inner_derivs[j].mul(&inv_derivs[kk - j])?;
                        acc = acc.add(&term.scale(c64(c, 0.0)))?;
                    }
                    inv_derivs.push(inv0.mul(&acc)?.scale(c64(-1.0, 0.0)));
                }
                Ok(inv_derivs.pop().expect("built k+1 entries"))
            }
            OperatorExpr::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::EmptySequence { op: "Product" });
                }
                if factors.len() == 1 {
                    return self.deriv_inner(&factors[0], k, lambda);
                }
                // Factor-derivative table, each order computed once.
                let mut table: Vec<Vec<CMatrix>> = Vec::with_capacity(factors.len());
                for f in factors {
                    let mut per = Vec::with_capacity(k + 1);
                    for j in 0..=k {
                        per.push(self.deriv_inner(f, j, lambda)?);
                    }
                    table.push(per);
                }
                let mut acc: Option<CMatrix> = None;
                for (coeff, orders) in leibniz_expand(k, factors.len())? {
                    let mut term = table[0][orders[0]].clone();
                    for (fi, &o) in orders.iter().enumerate().skip(1) {
                        term = term.mul(&table[fi][o])?;
                    }
                    let term = term.scale(c64(coeff as f64, 0.0));
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                Ok(acc.expect("at least one composition"))
            }
            OperatorExpr::Sum(terms) => {
                if terms.is_empty() {
                    return Err(Error::EmptySequence { op: "Sum" });
                }
                let mut acc: Option<CMatrix> = None;
                for (c, e) in terms {
                    let term = self.deriv_inner(e, k, lambda)?.scale(*c);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                Ok(acc.expect("at least one term"))
            }
        }
    }

    /// `M^(k)(lambda)`, from the stack (boundary contexts) or the closed form
    /// `k! gamma^* R^{k-1} gamma` (full contexts).
    fn weyl_derivative(&self, k: usize, lambda: Complex64) -> Result<CMatrix> {
        check_order(k)?;
        self.leaf(LeafKey::WeylDeriv(k), lambda)
    }

    fn leaf(&self, key: LeafKey, lambda: Complex64) -> Result<CMatrix> {
        let cache_key = (lambda.re.to_bits(), lambda.im.to_bits(), key);
        if let Some(hit) = self.cache.borrow().get(&cache_key) {
            return Ok(hit.clone());
        }
        let value = self.leaf_uncached(key, lambda)?;
        self.cache.borrow_mut().insert(cache_key, value.clone());
        Ok(value)
    }

    fn leaf_uncached(&self, key: LeafKey, lambda: Complex64) -> Result<CMatrix> {
        match &self.source {
            Source::Full { triple, reference } => match key {
                LeafKey::Gamma => triple.gamma(lambda),
                LeafKey::GammaStar => triple.gamma_star(lambda),
                LeafKey::ResolventPow(k) => reference.resolvent_power(lambda, k),
                LeafKey::WeylDeriv(0) => triple.weyl(lambda),
                LeafKey::WeylDeriv(k) => {
                    // M^(k) = k! gamma^* R^{k-1} gamma
                    let gs = self.leaf(LeafKey::GammaStar, lambda)?;
                    let gamma = self.leaf(LeafKey::Gamma, lambda)?;
                    let mid = if k == 1 {
                        gs.mul(&gamma)?
                    } else {
                        let r = self.leaf(LeafKey::ResolventPow(k - 1), lambda)?;
                        gs.mul(&r)?.mul(&gamma)?
                    };
                    Ok(mid.scale(c64(FACT[k], 0.0)))
                }
            },
            Source::Boundary { weyl_derivs, .. } => match key {
                LeafKey::WeylDeriv(k) => {
                    weyl_derivs
                        .get(k)
                        .cloned()
                        .ok_or(Error::DepthExceeded {
                            order: k,
                            max: weyl_derivs.len() - 1,
                        })
                }
                other => Err(Error::DimensionMismatch {
                    op: "EvalContext::boundary_only",
                    detail: format!(
                        "expression needs interior leaf {other:?}; only Weyl derivatives are available"
                    ),
                }),
            },
        }
    }
}

/// Central finite-difference derivative of a matrix-valued function, with one
/// step of Richardson extrapolation.
///
/// Supports orders 1 through 4.  Central stencils have O(h^2) truncation
/// error for every order, so `(4 D(h/2) - D(h)) / 3` removes the leading
/// term, leaving O(h^4) truncation against O(eps / h^k) roundoff; the default
/// step balances the two at `eps^(1/(4+k))` (times `max(1, |lambda|)`), which
/// keeps the oracle well below 1e-6 relative error for smooth inputs.
/// Evaluation failures at shifted points (for example, a stencil node
/// colliding with an eigenvalue) surface as [`Error::StencilHitsSpectrum`].
pub fn fd_derivative<F>(
    mut f: F,
    lambda: Complex64,
    k: usize,
    step: Option<f64>,
) -> Result<CMatrix>
where
    F: FnMut(Complex64) -> Result<CMatrix>,
{
    if k == 0 {
        return f(lambda);
    }
    if k > 4 {
        return Err(Error::DepthExceeded { order: k, max: 4 });
    }
    let balanced = f64::EPSILON.powf(1.0 / (4.0 + k as f64));
    let h = step.unwrap_or(balanced * lambda.norm().max(1.0));
    let coarse = fd_stencil(&mut f, lambda, k, h)?;
    let fine = fd_stencil(&mut f, lambda, k, h / 2.0)?;
    // (4 fine - coarse) / 3
    Ok(fine
        .scale(c64(4.0 / 3.0, 0.0))
        .sub(&coarse.scale(c64(1.0 / 3.0, 0.0)))?)
}

fn fd_stencil<F>(f: &mut F, lambda: Complex64, k: usize, h: f64) -> Result<CMatrix>
where
    F: FnMut(Complex64) -> Result<CMatrix>,
{
    let eval = |f: &mut F, offset: f64| -> Result<CMatrix> {
        let point = lambda + c64(offset * h, 0.0);
        f(point).map_err(|e| match e {
            Error::LambdaInSpectrum { .. } | Error::Singular { .. } => {
                Error::StencilHitsSpectrum {
                    point: format_lambda(point),
                }
            }
            other => other,
        })
    };
    // (offset, weight) pairs; divide by h^k at the end.
    let stencil: &[(f64, f64)] = match k {
        1 => &[(1.0, 0.5), (-1.0, -0.5)],
        2 => &[(1.0, 1.0), (0.0, -2.0), (-1.0, 1.0)],
        3 => &[(2.0, 0.5), (1.0, -1.0), (-1.0, 1.0), (-2.0, -0.5)],
        4 => &[
            (2.0, 1.0),
            (1.0, -4.0),
            (0.0, 6.0),
            (-1.0, -4.0),
            (-2.0, 1.0),
        ],
        _ => unreachable!("order checked above"),
    };
    let mut acc: Option<CMatrix> = None;
    for &(offset, weight) in stencil {
        if weight == 0.0 {
            continue;
        }
        let term = eval(f, offset)?.scale(c64(weight, 0.0));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc
        .expect("stencil is non-empty")
        .scale(c64(1.0 / h.powi(k as i32), 0.0)))
}
