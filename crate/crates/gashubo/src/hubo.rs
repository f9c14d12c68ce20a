//! Sparse pseudo-Boolean polynomials over binary variables.
//!
//! A [`HuboPolynomial`] stores a map from monomials (sets of variable
//! indices, `b_i^2 = b_i` always reduced) to real coefficients. It is the
//! objective representation shared by the solver, the circuit builder and
//! the detection front end. Brute-force enumeration doubles as the
//! classical oracle that every quantum-path result is checked against.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

use crate::Scalar;

/// Coefficients with magnitude below this are dropped when a polynomial is
/// compressed: cancellation noise from the norm expansion would otherwise
/// survive as spurious terms and inflate gate counts.
pub const COEFF_EPS: f64 = 1e-12;

/// Largest variable count for exhaustive enumeration (2^n assignments).
pub const MAX_BRUTE_FORCE_VARS: usize = 30;

/// Variable count above which [`HuboPolynomial::bounds`] switches from
/// exhaustive enumeration to the interval-sum relaxation.
pub const MAX_EXACT_BOUNDS_VARS: usize = 20;

/// Errors from polynomial construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HuboError {
    /// A bit-vector of the wrong length was supplied.
    LengthMismatch { expected: usize, actual: usize },
    /// Exhaustive enumeration was requested for too many variables.
    EnumerationTooLarge { n: usize, max: usize },
    /// A text line could not be parsed.
    Parse { line: usize, message: String },
}

impl fmt::Display for HuboError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HuboError::LengthMismatch { expected, actual } => {
                write!(
                    f,
                    "bit-vector length {actual} does not match variable count {expected}"
                )
            }
            HuboError::EnumerationTooLarge { n, max } => {
                write!(
                    f,
                    "exhaustive enumeration over {n} variables exceeds the cap of {max}"
                )
            }
            HuboError::Parse { line, message } => {
                write!(f, "polynomial text, line {line}: {message}")
            }
        }
    }
}

impl Error for HuboError {}

/// A product of distinct binary variables, stored as a bitmask over the
/// variable indices (bit `i` set means `b_i` participates). The empty mask
/// is the constant monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

impl Monomial {
    /// The constant monomial (empty variable set).
    pub const CONSTANT: Monomial = Monomial(0);

    /// Builds a monomial from variable indices; duplicates collapse since
    /// `b_i^2 = b_i`.
    pub fn from_indices(indices: &[usize]) -> Monomial {
        let mut mask = 0u64;
        for &i in indices {
            assert!(i < 64, "variable index {i} out of range");
            mask |= 1 << i;
        }
        Monomial(mask)
    }

    pub fn from_mask(mask: u64) -> Monomial {
        Monomial(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Number of participating variables.
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Ascending variable indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |i| mask >> i & 1 == 1)
    }
}

/// A real-coefficient polynomial over `n` binary variables.
///
/// Terms are keyed by monomial mask in a `BTreeMap` so iteration order (and
/// hence circuit construction, text output and gate counts) is
/// deterministic. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HuboPolynomial<T> {
    n: usize,
    terms: BTreeMap<u64, T>,
}

/// Rounding used by the integer approximation of real coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Round to the nearest integer (ties away from zero).
    Nearest,
    /// Round toward negative infinity.
    Floor,
}

/// Attainable-value bounds of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueBounds<T> {
    pub e_min: T,
    pub e_max: T,
}

impl<T: Scalar> ValueBounds<T> {
    pub fn new(e_min: T, e_max: T) -> Self {
        assert!(e_min <= e_max, "invalid bounds");
        ValueBounds { e_min, e_max }
    }

    /// Width of the value range, `e_max - e_min`.
    pub fn span(&self) -> T {
        self.e_max - self.e_min
    }
}

impl<T: Scalar> HuboPolynomial<T> {
    /// The zero polynomial over `n` variables (`n <= 64`).
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "at most 64 binary variables are supported");
        HuboPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(n: usize, value: T) -> Self {
        let mut p = Self::new(n);
        p.add_term(Monomial::CONSTANT, value);
        p
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, T)>,
    {
        let mut p = Self::new(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial degree, 0 for constant or empty polynomials.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Iterates `(monomial, coefficient)` in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, T)> + '_ {
        self.terms.iter().map(|(&m, &c)| (Monomial(m), c))
    }

    pub fn coefficient(&self, monomial: Monomial) -> T {
        self.terms
            .get(&monomial.mask())
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Adds `coeff` to the monomial's coefficient, merging and removing the
    /// term if the result is exactly zero.
    pub fn add_term(&mut self, monomial: Monomial, coeff: T) {
        assert!(
            self.n == 64 || monomial.mask() >> self.n == 0,
            "monomial uses variables beyond n={}",
            self.n
        );
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial.mask()).or_insert_with(T::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&monomial.mask());
        }
    }

    /// Drops terms whose coefficient magnitude is below [`COEFF_EPS`].
    pub fn compress(&mut self) {
        let eps = T::of(COEFF_EPS);
        self.terms.retain(|_, c| c.abs() >= eps);
    }

    /// `self += scale * other` (variable counts must agree).
    pub fn add_scaled(&mut self, other: &Self, scale: T) {
        assert_eq!(self.n, other.n, "variable counts differ");
        for (m, c) in other.terms() {
            self.add_term(m, c * scale);
        }
    }

    pub fn scale(&mut self, factor: T) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    /// Polynomial product with the idempotent reduction `b_i^2 = b_i`
    /// (monomial masks are OR-combined).
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable counts differ");
        let mut out = Self::new(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(Monomial(ma.mask() | mb.mask()), ca * cb);
            }
        }
        out
    }

    /// Evaluates the polynomial on an assignment given as a bitmask
    /// (bit `i` of `bits_mask` is the value of `b_i`). No length check.
    pub fn evaluate_mask(&self, bits_mask: u64) -> T {
        let mut acc = T::zero();
        for (&m, &c) in &self.terms {
            if bits_mask & m == m {
                acc += c;
            }
        }
        acc
    }

    /// Evaluates the polynomial on a bit-vector of length `n`.
    pub fn evaluate(&self, bits: &[bool]) -> Result<T, HuboError> {
        if bits.len() != self.n {
            return Err(HuboError::LengthMismatch {
                expected: self.n,
                actual: bits.len(),
            });
        }
        Ok(self.evaluate_mask(bits_to_mask(bits)))
    }

    /// Exhaustive minimization. Returns the lexicographically-smallest
    /// argmin (as a bit-vector) and the minimum value.
    pub fn brute_force_min(&self) -> Result<(Vec<bool>, T), HuboError> {
        if self.n > MAX_BRUTE_FORCE_VARS {
            return Err(HuboError::EnumerationTooLarge {
                n: self.n,
                max: MAX_BRUTE_FORCE_VARS,
            });
        }
        let (mask, value) = self.scan_assignments();
        Ok((mask_to_bits(mask, self.n), value))
    }

    /// Counts assignments with `E(b) < threshold` (the marked-state count
    /// `N_s` of the Grover analysis).
    pub fn count_below(&self, threshold: T) -> Result<u64, HuboError> {
        if self.n > MAX_BRUTE_FORCE_VARS {
            return Err(HuboError::EnumerationTooLarge {
                n: self.n,
                max: MAX_BRUTE_FORCE_VARS,
            });
        }
        let total = 1u64 << self.n;
        Ok((0..total)
            .filter(|&m| self.evaluate_mask(m) < threshold)
            .count() as u64)
    }

    fn scan_assignments(&self) -> (u64, T) {
        use rayon::prelude::*;

        let total = 1u64 << self.n;
        let pick = |a: (u64, T), b: (u64, T)| {
            // Ties broken toward the lexicographically-smallest bit-vector,
            // i.e. the smaller bit-reversed mask.
            if b.1 < a.1 || (b.1 == a.1 && lex_key(b.0, self.n) < lex_key(a.0, self.n)) {
                b
            } else {
                a
            }
        };
        if self.n <= 16 {
            let mut best = (0u64, self.evaluate_mask(0));
            for m in 1..total {
                best = pick(best, (m, self.evaluate_mask(m)));
            }
            best
        } else {
            (0..total)
                .into_par_iter()
                .map(|m| (m, self.evaluate_mask(m)))
                .reduce_with(pick)
                .expect("nonempty range")
        }
    }

    /// Attainable-value bounds: exact by enumeration for small `n`,
    /// otherwise the interval-sum relaxation.
    pub fn bounds(&self) -> ValueBounds<T> {
        if self.n <= MAX_EXACT_BOUNDS_VARS {
            self.bounds_exact()
        } else {
            self.bounds_relaxed()
        }
    }

    fn bounds_exact(&self) -> ValueBounds<T> {
        let total = 1u64 << self.n;
        let mut lo = self.evaluate_mask(0);
        let mut hi = lo;
        for m in 1..total {
            let v = self.evaluate_mask(m);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        ValueBounds::new(lo, hi)
    }

    /// Sign-split relaxation: every negative coefficient counts toward the
    /// minimum, every positive one toward the maximum. Always contains the
    /// exact bounds.
    pub fn bounds_relaxed(&self) -> ValueBounds<T> {
        let constant = self.coefficient(Monomial::CONSTANT);
        let mut lo = constant;
        let mut hi = constant;
        for (m, c) in self.terms() {
            if m == Monomial::CONSTANT {
                continue;
            }
            if c < T::zero() {
                lo += c;
            } else {
                hi += c;
            }
        }
        ValueBounds::new(lo, hi)
    }

    /// Replaces every coefficient by `round(coeff * factor)`. The result
    /// has integer-valued coefficients (still stored as scalars); terms
    /// that round to zero disappear.
    pub fn integer_approximation(&self, factor: T, rounding: Rounding) -> Self {
        assert!(factor > T::zero(), "scale factor must be positive");
        let mut out = Self::new(self.n);
        for (m, c) in self.terms() {
            let scaled = c * factor;
            let rounded = match rounding {
                Rounding::Nearest => scaled.round(),
                Rounding::Floor => scaled.floor(),
            };
            out.add_term(m, rounded);
        }
        out
    }

    /// True when every coefficient is integer-valued.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.fract().is_zero())
    }

    /// Serializes as one term per line: `coeff i1 i2 ... ik`, the constant
    /// term as a bare coefficient.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms() {
            out.push_str(&format!("{c}"));
            for i in m.indices() {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format of [`Self::to_text`]. Blank lines and lines
    /// starting with `#` are skipped. When `n` is `None` the variable count
    /// is inferred as `max index + 1`.
    pub fn from_text(text: &str, n: Option<usize>) -> Result<Self, HuboError> {
        let mut parsed: Vec<(u64, T, usize)> = Vec::new();
        let mut max_index: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let coeff_text = fields.next().expect("nonempty line");
            let coeff = coeff_text.parse::<f64>().map_err(|e| HuboError::Parse {
                line: lineno + 1,
                message: format!("bad coefficient {coeff_text:?}: {e}"),
            })?;
            let mut mask = 0u64;
            for tok in fields {
                let idx = tok.parse::<usize>().map_err(|e| HuboError::Parse {
                    line: lineno + 1,
                    message: format!("bad variable index {tok:?}: {e}"),
                })?;
                if idx >= 64 {
                    return Err(HuboError::Parse {
                        line: lineno + 1,
                        message: format!("variable index {idx} out of range (max 63)"),
                    });
                }
                mask |= 1 << idx;
                max_index = Some(max_index.map_or(idx, |m| m.max(idx)));
            }
            parsed.push((mask, T::of(coeff), lineno + 1));
        }
        let inferred = max_index.map_or(0, |m| m + 1);
        let n = n.unwrap_or(inferred);
        if inferred > n {
            return Err(HuboError::Parse {
                line: 0,
                message: format!("polynomial uses {inferred} variables but n={n} was requested"),
            });
        }
        let mut poly = Self::new(n);
        for (mask, coeff, _) in parsed {
            poly.add_term(Monomial::from_mask(mask), coeff);
        }
        Ok(poly)
    }
}

/// Smallest `m` such that an `m`-qubit two's-complement register holds every
/// value the solver can encounter: the objective values themselves, the
/// negated threshold shifts, and the spans `E(b) - y_i`. Formally the least
/// `m >= 1` with `-2^(m-1) <= min(e_min, -span)` and
/// `max(e_max, span) < 2^(m-1)`.
pub fn required_qubits_m<T: Scalar>(bounds: &ValueBounds<T>) -> u32 {
    let span = bounds.span();
    let lo = bounds.e_min.min(-span);
    let hi = bounds.e_max.max(span);
    let two = T::of(2.0);
    let mut m = 1u32;
    loop {
        let half = two.powi(m as i32 - 1);
        if -half <= lo && hi < half {
            return m;
        }
        m += 1;
        assert!(m < 64, "value range too wide for a 64-bit register");
    }
}

/// Packs a bit-vector into a mask (bit `i` = `bits[i]`).
pub fn bits_to_mask(bits: &[bool]) -> u64 {
    assert!(bits.len() <= 64);
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Unpacks a mask into a bit-vector of length `n`.
pub fn mask_to_bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Formats bits as a compact `0`/`1` string in index order.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses a `0`/`1` string into a bit-vector.
pub fn bits_from_string(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Numeric key whose ordering is the lexicographic ordering of the
/// bit-vector `[b_0, ..., b_{n-1}]` encoded in `mask`.
fn lex_key(mask: u64, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    mask.reverse_bits() >> (64 - n)
}
