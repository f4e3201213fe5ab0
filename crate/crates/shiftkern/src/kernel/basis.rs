//! One-dimensional shiftable expansions.
//!
//! An expansion represents a kernel whose every translate is an exact linear
//! combination of a fixed, finite basis: for all t and shifts τ,
//!
//! ```text
//! kernel(t - τ) = Σ_n coeff_n(τ) · basis_n(t)
//! ```
//!
//! Only the coefficients depend on the shift, which is what lets filtering
//! reduce to moving sums of pointwise-transformed images. Two families are
//! provided: powers of a cosine (trigonometric basis, order N+1) and even
//! polynomial windows (monomial basis, order 2N+1).

use std::f64::consts::PI;

use super::KernelError;

/// A single real basis function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFunction1D {
    /// `cos(frequency · t)`; frequency 0 is the constant function.
    Cosine { frequency: f64 },
    /// `sin(frequency · t)`
    Sine { frequency: f64 },
    /// `t^degree`
    Monomial { degree: u32 },
}

impl BasisFunction1D {
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            BasisFunction1D::Cosine { frequency } => (frequency * t).cos(),
            BasisFunction1D::Sine { frequency } => (frequency * t).sin(),
            BasisFunction1D::Monomial { degree } => t.powi(degree as i32),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BasisFunction1D::Cosine { .. } => "cosine",
            BasisFunction1D::Sine { .. } => "sine",
            BasisFunction1D::Monomial { .. } => "monomial",
        }
    }

    /// The frequency of a trigonometric term or the degree of a monomial.
    pub fn frequency_or_degree(&self) -> f64 {
        match *self {
            BasisFunction1D::Cosine { frequency } | BasisFunction1D::Sine { frequency } => {
                frequency
            }
            BasisFunction1D::Monomial { degree } => degree as f64,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    basis: BasisFunction1D,
    /// Fixed significance weight, used for truncation and CSV export.
    weight: f64,
}

#[derive(Debug, Clone)]
enum CoeffRule {
    /// Coefficient of a trig term is `weight · trig(frequency · shift)` with
    /// the same trig kind as the basis function.
    Trig,
    /// Coefficients are the monomial coefficients of
    /// `(1 - (t - shift)² / scale²)^order` expanded in t. Computed by
    /// convolving the binomial expansions of the two linear factors
    /// `((1+σ) - s)·((1-σ) + s)`, σ = shift/scale, with compensated
    /// summation: the convolution cancels heavily at high orders and naive
    /// accumulation loses the identity.
    PolyShift {
        scale: f64,
        order: u32,
        /// Binomial row C(order, i).
        binomials: Vec<f64>,
    },
}

/// Unevaluated double-f64 value. The convolution behind the monomial
/// coefficients cancels terms of binomial magnitude down to order-one
/// results; plain f64 intermediates would lose the shiftability identity at
/// high orders, so the factor vectors and their products are carried in
/// roughly 32 digits.
#[derive(Debug, Clone, Copy)]
struct TwoFloat {
    hi: f64,
    lo: f64,
}

impl TwoFloat {
    const ZERO: TwoFloat = TwoFloat { hi: 0.0, lo: 0.0 };

    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, other: TwoFloat) -> TwoFloat {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = fast_two_sum(s, e);
        TwoFloat { hi, lo }
    }

    fn mul(self, other: TwoFloat) -> TwoFloat {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = fast_two_sum(p, e);
        TwoFloat { hi, lo }
    }

    fn scale(self, factor: f64) -> TwoFloat {
        self.mul(TwoFloat::from(factor))
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Coefficient vectors of `((1+σ) - s)^N` and `((1-σ) + s)^N` in s.
fn poly_factor_vectors(
    binomials: &[f64],
    sigma: f64,
    a: &mut [TwoFloat],
    b: &mut [TwoFloat],
) {
    let n = binomials.len() - 1;
    let up = TwoFloat::from(1.0).add(TwoFloat::from(sigma));
    let down = TwoFloat::from(1.0).add(TwoFloat::from(-sigma));
    let mut up_pow = TwoFloat::from(1.0);
    let mut down_pow = TwoFloat::from(1.0);
    for i in 0..=n {
        // exponent N - i, filled from the high end
        let sign = if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        a[n - i] = up_pow.scale(binomials[n - i] * sign);
        b[n - i] = down_pow.scale(binomials[n - i]);
        up_pow = up_pow.mul(up);
        down_pow = down_pow.mul(down);
    }
}

/// Coefficient of s^degree in the product of the two factor vectors.
fn poly_convolved_coeff(a: &[TwoFloat], b: &[TwoFloat], degree: usize) -> f64 {
    let n = a.len() - 1;
    let lo = degree.saturating_sub(n);
    let hi = degree.min(n);
    let mut sum = TwoFloat::ZERO;
    for i in lo..=hi {
        sum = sum.add(a[i].mul(b[degree - i]));
    }
    sum.value()
}

#[derive(Debug, Clone, Copy)]
enum KernelForm {
    /// `cos(frequency · t)^order`
    CosPower { frequency: f64, order: u32 },
    /// `(1 - t²/scale²)^order`
    PolyPower { scale: f64, order: u32 },
    /// No closed form (after truncation); evaluate the series at shift 0.
    Series,
}

/// A kernel together with its shiftable basis and coefficient rule.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct ShiftableExpansion1D {
    terms: Vec<Term>,
    halfwidth: f64,
    coeff_rule: CoeffRule,
    kernel_form: KernelForm,
}

impl ShiftableExpansion1D {
    /// Number of basis functions (the order of shiftability).
    #[must_use]
    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// Half-width T of the interval [-T, T] the kernel is designed for.
    #[must_use]
    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn basis(&self, index: usize) -> &BasisFunction1D {
        &self.terms[index].basis
    }

    /// Fixed significance weight of a term.
    pub fn weight(&self, index: usize) -> f64 {
        self.terms[index].weight
    }

    /// Evaluates basis function `index` at `t`.
    #[inline]
    pub fn basis_value(&self, index: usize, t: f64) -> f64 {
        self.terms[index].basis.value(t)
    }

    /// Evaluates the shift-dependent coefficient of term `index` at `shift`.
    ///
    /// For expansions with many monomial terms prefer [`coeffs_into`]: the
    /// polynomial rule shares per-shift factor vectors across terms.
    ///
    /// [`coeffs_into`]: Self::coeffs_into
    pub fn coeff_value(&self, index: usize, shift: f64) -> f64 {
        match &self.coeff_rule {
            CoeffRule::Trig => self.trig_coeff(index, shift),
            CoeffRule::PolyShift {
                scale,
                order,
                binomials,
            } => {
                let BasisFunction1D::Monomial { degree } = self.terms[index].basis else {
                    unreachable!("poly rule on trig term")
                };
                let n = *order as usize;
                let mut a = vec![TwoFloat::ZERO; n + 1];
                let mut b = vec![TwoFloat::ZERO; n + 1];
                poly_factor_vectors(binomials, shift / scale, &mut a, &mut b);
                poly_convolved_coeff(&a, &b, degree as usize) * scale.powi(-(degree as i32))
            }
        }
    }

    #[inline]
    fn trig_coeff(&self, index: usize, shift: f64) -> f64 {
        let term = &self.terms[index];
        match term.basis {
            BasisFunction1D::Cosine { frequency } => term.weight * (frequency * shift).cos(),
            BasisFunction1D::Sine { frequency } => term.weight * (frequency * shift).sin(),
            BasisFunction1D::Monomial { .. } => unreachable!("trig rule on monomial term"),
        }
    }

    /// Writes all coefficients at `shift` into `out` (length = order).
    pub fn coeffs_into(&self, shift: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.terms.len());
        match &self.coeff_rule {
            CoeffRule::Trig => {
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = self.trig_coeff(i, shift);
                }
            }
            CoeffRule::PolyShift {
                scale,
                order,
                binomials,
            } => {
                let n = *order as usize;
                let mut a = vec![TwoFloat::ZERO; n + 1];
                let mut b = vec![TwoFloat::ZERO; n + 1];
                poly_factor_vectors(binomials, shift / scale, &mut a, &mut b);
                for (slot, term) in out.iter_mut().zip(&self.terms) {
                    let BasisFunction1D::Monomial { degree } = term.basis else {
                        unreachable!("poly rule on trig term")
                    };
                    *slot = poly_convolved_coeff(&a, &b, degree as usize)
                        * scale.powi(-(degree as i32));
                }
            }
        }
    }

    /// Coefficient vector at `shift`.
    pub fn coeffs(&self, shift: f64) -> Vec<f64> {
        (0..self.terms.len())
            .map(|i| self.coeff_value(i, shift))
            .collect()
    }

    /// Evaluates the kernel itself at `t` (closed form when available,
    /// otherwise the series at shift 0).
    pub fn kernel_value(&self, t: f64) -> f64 {
        match self.kernel_form {
            KernelForm::CosPower { frequency, order } => (frequency * t).cos().powi(order as i32),
            KernelForm::PolyPower { scale, order } => {
                (1.0 - (t / scale) * (t / scale)).powi(order as i32)
            }
            KernelForm::Series => self
                .terms
                .iter()
                .enumerate()
                .map(|(i, term)| self.coeff_value(i, 0.0) * term.basis.value(t))
                .sum(),
        }
    }

    /// Reconstructs `kernel(t - shift)` through the basis; exercised by the
    /// shiftability tests.
    pub fn reconstruct(&self, t: f64, shift: f64) -> f64 {
        (0..self.terms.len())
            .map(|i| self.coeff_value(i, shift) * self.basis_value(i, t))
            .sum()
    }
}

fn check_halfwidth(halfwidth: f64) -> Result<(), KernelError> {
    if halfwidth > 0.0 && halfwidth.is_finite() {
        Ok(())
    } else {
        Err(KernelError::InvalidHalfwidth(halfwidth))
    }
}

/// Expansion of the raised-cosine kernel `cos(π t / 2T)^order` on [-T, T].
///
/// The basis has exactly `order + 1` real functions: the complex exponentials
/// of `cos^N` merge into cosine/sine pairs at the distinct frequencies
/// `|2k - N| · π/2T`, plus a constant term when the order is even.
pub fn raised_cosine_expansion(
    order: u32,
    halfwidth: f64,
) -> Result<ShiftableExpansion1D, KernelError> {
    check_halfwidth(halfwidth)?;
    Ok(raised_cosine_scaled(
        order,
        PI / (2.0 * halfwidth),
        halfwidth,
    ))
}

/// Raised-cosine family with an explicit base frequency: the kernel
/// `cos(base_frequency · t)^order`. Used directly by the Gaussian fits,
/// where the frequency is set by the target standard deviation rather than
/// by the half-width.
pub(crate) fn raised_cosine_scaled(
    order: u32,
    base_frequency: f64,
    halfwidth: f64,
) -> ShiftableExpansion1D {
    let n = order as usize;
    // Binomial weights 2^-N · C(N, k), built by recurrence.
    let mut binrow = vec![0.0; n + 1];
    binrow[0] = 0.5f64.powi(order as i32);
    for k in 1..=n {
        binrow[k] = binrow[k - 1] * ((n - k + 1) as f64) / (k as f64);
    }

    let mut terms = Vec::with_capacity(n + 1);
    if n.is_multiple_of(2) {
        terms.push(Term {
            basis: BasisFunction1D::Cosine { frequency: 0.0 },
            weight: binrow[n / 2],
        });
    }
    // Conjugate pairs k and N-k merge: frequency m = 2k - N > 0, weight doubled.
    let first = if n.is_multiple_of(2) { 2 } else { 1 };
    for m in (first..=n).step_by(2) {
        let k = (m + n) / 2;
        let weight = 2.0 * binrow[k];
        let frequency = m as f64 * base_frequency;
        terms.push(Term {
            basis: BasisFunction1D::Cosine { frequency },
            weight,
        });
        terms.push(Term {
            basis: BasisFunction1D::Sine { frequency },
            weight,
        });
    }
    debug_assert_eq!(terms.len(), n + 1);

    ShiftableExpansion1D {
        terms,
        halfwidth,
        coeff_rule: CoeffRule::Trig,
        kernel_form: KernelForm::CosPower {
            frequency: base_frequency,
            order,
        },
    }
}

/// Expansion of the polynomial window `(1 - t²/T²)^order` on [-T, T].
///
/// The basis is the `2·order + 1` monomials `1, t, …, t^(2N)`; shifting the
/// kernel is a Taylor shift of its coefficient vector.
pub fn polynomial_expansion(
    order: u32,
    halfwidth: f64,
) -> Result<ShiftableExpansion1D, KernelError> {
    check_halfwidth(halfwidth)?;
    Ok(polynomial_scaled(order, halfwidth, halfwidth))
}

/// Polynomial family with an explicit scale: `(1 - t²/scale²)^order` hosted
/// on [-halfwidth, halfwidth]. The Gaussian fit widens the scale beyond the
/// half-width.
pub(crate) fn polynomial_scaled(order: u32, scale: f64, halfwidth: f64) -> ShiftableExpansion1D {
    let n = order as usize;
    let degree_count = 2 * n + 1;

    let mut binomials = vec![0.0; n + 1];
    binomials[0] = 1.0;
    for i in 1..=n {
        binomials[i] = binomials[i - 1] * ((n - i + 1) as f64) / (i as f64);
    }

    let terms: Vec<Term> = (0..degree_count)
        .map(|degree| Term {
            basis: BasisFunction1D::Monomial {
                degree: degree as u32,
            },
            weight: 0.0,
        })
        .collect();
    let mut expansion = ShiftableExpansion1D {
        terms,
        halfwidth,
        coeff_rule: CoeffRule::PolyShift {
            scale,
            order,
            binomials,
        },
        kernel_form: KernelForm::PolyPower { scale, order },
    };

    // Fixed weights: the largest magnitude of each coefficient over a shift
    // grid, scaled by the basis sup T^degree, so that truncation compares
    // like-sized contributions.
    let grid = 257;
    let mut coeffs = vec![0.0; degree_count];
    let mut weights = vec![0.0f64; degree_count];
    for i in 0..grid {
        let shift = -halfwidth + 2.0 * halfwidth * (i as f64) / ((grid - 1) as f64);
        expansion.coeffs_into(shift, &mut coeffs);
        for (degree, (&c, weight)) in coeffs.iter().zip(&mut weights).enumerate() {
            let significance = c.abs() * halfwidth.powi(degree as i32);
            if significance > *weight {
                *weight = significance;
            }
        }
    }
    for (term, weight) in expansion.terms.iter_mut().zip(weights) {
        term.weight = weight;
    }

    expansion
}

/// Result of dropping low-weight basis terms from an expansion.
#[derive(Debug, Clone)]
pub struct TruncationOutcome {
    pub expansion: ShiftableExpansion1D,
    /// Number of basis terms removed.
    pub dropped: usize,
    /// Largest pointwise deviation from the untruncated kernel on a
    /// 1001-point grid over [-T, T].
    pub deviation_bound: f64,
}

/// Drops terms whose fixed weight falls below `epsilon` times the largest
/// weight. Remaining coefficients are left unrenormalized; the resulting
/// kernel may mildly violate nonnegativity, and the measured deviation from
/// the full kernel is reported.
pub fn truncate_expansion(
    expansion: &ShiftableExpansion1D,
    epsilon: f64,
) -> Result<TruncationOutcome, KernelError> {
    if !(0.0..1.0).contains(&epsilon) || !epsilon.is_finite() {
        return Err(KernelError::InvalidTolerance(epsilon));
    }
    if epsilon == 0.0 {
        return Ok(TruncationOutcome {
            expansion: expansion.clone(),
            dropped: 0,
            deviation_bound: 0.0,
        });
    }

    let max_weight = expansion
        .terms
        .iter()
        .map(|t| t.weight.abs())
        .fold(0.0, f64::max);
    let threshold = epsilon * max_weight;
    let kept: Vec<Term> = expansion
        .terms
        .iter()
        .filter(|t| t.weight.abs() >= threshold)
        .copied()
        .collect();
    let dropped = expansion.terms.len() - kept.len();

    let truncated = ShiftableExpansion1D {
        terms: kept,
        halfwidth: expansion.halfwidth,
        coeff_rule: expansion.coeff_rule.clone(),
        kernel_form: if dropped == 0 {
            expansion.kernel_form
        } else {
            KernelForm::Series
        },
    };

    let mut deviation_bound = 0.0f64;
    if dropped > 0 {
        let half = expansion.halfwidth;
        for i in 0..1001 {
            let t = -half + 2.0 * half * (i as f64) / 1000.0;
            let d = (truncated.kernel_value(t) - expansion.kernel_value(t)).abs();
            deviation_bound = deviation_bound.max(d);
        }
    }

    Ok(TruncationOutcome {
        expansion: truncated,
        dropped,
        deviation_bound,
    })
}
