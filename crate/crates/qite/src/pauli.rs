//! Pauli strings and real-weighted Pauli sums in a symplectic encoding.
//!
//! A Pauli string is stored as a pair of bitmasks `(x_mask, z_mask)` over
//! qubit indices plus a power-of-`i` phase exponent, so products cost a few
//! word operations instead of matrix multiplications. The operator realized
//! by a string is
//!
//! ```text
//!     i^phase_exp · ⊗_q X_q^{x_q} Z_q^{z_q}
//! ```
//!
//! Canonical strings carry the phase that makes the operator equal to the
//! literal tensor product of `{I, X, Y, Z}` symbols (`Y = i·XZ`), so they are
//! Hermitian. Qubit 0 is the leftmost tensor factor, i.e. the most
//! significant bit of an amplitude index; `statevec` uses the same
//! convention.

use ndarray::Array2;
use num_complex::Complex64;
use std::fmt;

/// Largest qubit count for which dense matrices are materialized.
pub const MAX_DENSE_QUBITS: usize = 12;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn phase_factor(exp: u8) -> Complex64 {
    match exp % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Convert a per-qubit mask (bit q = qubit q) into an amplitude-index mask
/// (qubit 0 = most significant bit).
pub(crate) fn index_mask(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for q in 0..n {
        if mask >> q & 1 == 1 {
            out |= 1 << (n - 1 - q);
        }
    }
    out
}

/// A tensor product of single-qubit Pauli operators with a tracked phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

impl PauliString {
    /// The identity string on `n` qubits.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= 64, "qubit count {n} out of range");
        PauliString {
            n_qubits: n,
            x_mask: 0,
            z_mask: 0,
            phase_exp: 0,
        }
    }

    /// Build the canonical (Hermitian) string with the given symplectic masks.
    ///
    /// The phase is set so the operator equals the literal tensor product of
    /// symbols, with `Y` on every qubit where both masks are set.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64) -> Self {
        assert!(n >= 1 && n <= 64, "qubit count {n} out of range");
        if n < 64 {
            assert!(
                x_mask >> n == 0 && z_mask >> n == 0,
                "mask bits set beyond qubit count {n}"
            );
        }
        let y_count = (x_mask & z_mask).count_ones() as u8;
        PauliString {
            n_qubits: n,
            x_mask,
            z_mask,
            phase_exp: y_count % 4,
        }
    }

    /// Parse a symbol word like `"XIZY"`, qubit 0 first.
    pub fn from_symbols(word: &str) -> Self {
        let n = word.chars().count();
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for (q, sym) in word.chars().enumerate() {
            match sym {
                'I' => {}
                'X' => x_mask |= 1 << q,
                'Y' => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                }
                'Z' => z_mask |= 1 << q,
                other => panic!("invalid Pauli symbol '{other}' in \"{word}\""),
            }
        }
        Self::from_masks(n, x_mask, z_mask)
    }

    /// Canonical single-qubit `X` on `qubit` of an `n`-qubit register.
    pub fn x(n: usize, qubit: usize) -> Self {
        assert!(qubit < n);
        Self::from_masks(n, 1 << qubit, 0)
    }

    /// Canonical single-qubit `Y`.
    pub fn y(n: usize, qubit: usize) -> Self {
        assert!(qubit < n);
        Self::from_masks(n, 1 << qubit, 1 << qubit)
    }

    /// Canonical single-qubit `Z`.
    pub fn z(n: usize, qubit: usize) -> Self {
        assert!(qubit < n);
        Self::from_masks(n, 0, 1 << qubit)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// The `i^phase_exp` prefactor as a complex number.
    pub fn phase(&self) -> Complex64 {
        phase_factor(self.phase_exp)
    }

    /// True when both masks are zero (identity up to phase).
    pub fn is_identity_op(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// True when the stored phase is the canonical (Hermitian) one.
    pub fn is_canonical(&self) -> bool {
        self.phase_exp == ((self.x_mask & self.z_mask).count_ones() as u8) % 4
    }

    /// Qubits on which the string acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let m = self.x_mask | self.z_mask;
        (0..self.n_qubits).filter(|q| m >> q & 1 == 1).collect()
    }

    /// Strip the phase, keeping the canonical string with the same masks.
    /// Returns the canonical string and the phase factor that was folded out,
    /// so `self = factor · canonical`.
    pub fn canonical_split(&self) -> (PauliString, Complex64) {
        let canon = PauliString::from_masks(self.n_qubits, self.x_mask, self.z_mask);
        let factor = phase_factor((4 + self.phase_exp - canon.phase_exp) % 4);
        (canon, factor)
    }

    /// Phase-tracked product: `matrix(result) == matrix(self)·matrix(rhs)`.
    pub fn mul(&self, rhs: &PauliString) -> PauliString {
        assert_eq!(
            self.n_qubits, rhs.n_qubits,
            "cannot multiply Pauli strings on different qubit counts"
        );
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1 per qubit.
        let anti = (self.z_mask & rhs.x_mask).count_ones() as u8;
        PauliString {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ rhs.x_mask,
            z_mask: self.z_mask ^ rhs.z_mask,
            phase_exp: (self.phase_exp + rhs.phase_exp + 2 * anti) % 4,
        }
    }

    /// Re-index onto `domain` (must contain the support). `domain[0]` becomes
    /// qubit 0 of the restricted string.
    pub fn restrict(&self, domain: &[usize]) -> PauliString {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut covered = 0u64;
        for (pos, &q) in domain.iter().enumerate() {
            assert!(q < self.n_qubits, "domain qubit {q} out of range");
            if self.x_mask >> q & 1 == 1 {
                x |= 1 << pos;
            }
            if self.z_mask >> q & 1 == 1 {
                z |= 1 << pos;
            }
            covered |= 1 << q;
        }
        assert!(
            (self.x_mask | self.z_mask) & !covered == 0,
            "string support not contained in domain"
        );
        PauliString {
            n_qubits: domain.len(),
            x_mask: x,
            z_mask: z,
            phase_exp: self.phase_exp,
        }
    }

    /// Dense matrix realization, `2^n × 2^n`. Guarded at [`MAX_DENSE_QUBITS`].
    pub fn to_matrix(&self) -> Array2<Complex64> {
        let n = self.n_qubits;
        assert!(
            n <= MAX_DENSE_QUBITS,
            "refusing to materialize a 2^{n} dense matrix"
        );
        let dim = 1usize << n;
        let xm = index_mask(self.x_mask, n);
        let zm = index_mask(self.z_mask, n);
        let ph = self.phase();
        let mut m = Array2::zeros((dim, dim));
        for col in 0..dim {
            let sign = if ((zm & col as u64).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            let row = col ^ xm as usize;
            m[[row, col]] = ph * sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    /// One symbol per qubit, qubit 0 first; phase not rendered.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            let x = self.x_mask >> q & 1 == 1;
            let z = self.z_mask >> q & 1 == 1;
            let sym = match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}·{}", self.phase_exp, self)
    }
}

impl std::ops::Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        PauliString::mul(self, rhs)
    }
}

/// All `4^D` Pauli strings supported on `domain` (identity elsewhere), in
/// lexicographic order over per-qubit symbols with `I < X < Y < Z` and
/// `domain[0]` most significant. With `include_identity` off the all-identity
/// string is skipped, leaving `4^D − 1` entries.
pub fn enumerate_strings(
    domain: &[usize],
    n_qubits: usize,
    include_identity: bool,
) -> Vec<PauliString> {
    assert!(!domain.is_empty(), "empty enumeration domain");
    let mut seen = 0u64;
    for &q in domain {
        assert!(q < n_qubits, "domain qubit {q} out of range");
        assert!(seen >> q & 1 == 0, "duplicate domain qubit {q}");
        seen |= 1 << q;
    }
    let d = domain.len();
    let total = 1usize << (2 * d);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        if code == 0 && !include_identity {
            continue;
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (pos, &q) in domain.iter().enumerate() {
            // domain[0] is the most significant base-4 digit
            let digit = code >> (2 * (d - 1 - pos)) & 3;
            match digit {
                0 => {}
                1 => x |= 1 << q,
                2 => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                _ => z |= 1 << q,
            }
        }
        out.push(PauliString::from_masks(n_qubits, x, z));
    }
    out
}

/// A sum of Pauli strings with complex coefficients, kept in canonical form:
/// terms merged by symplectic masks, zero terms dropped, strings canonical,
/// sorted by `(x_mask, z_mask)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1 && n_qubits <= 64);
        PauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Build from raw terms; canonicalizes.
    pub fn from_terms(n_qubits: usize, terms: Vec<(Complex64, PauliString)>) -> Self {
        let mut sum = PauliSum { n_qubits, terms };
        sum.canonicalize();
        sum
    }

    pub fn add_term(&mut self, coeff: Complex64, string: PauliString) {
        assert_eq!(string.n_qubits(), self.n_qubits, "term qubit count mismatch");
        self.terms.push((coeff, string));
        self.canonicalize();
    }

    /// Merge duplicate masks, fold phases into coefficients, drop exact
    /// zeros, sort. Idempotent.
    pub fn canonicalize(&mut self) {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for (c, p) in &self.terms {
            assert_eq!(p.n_qubits(), self.n_qubits, "term qubit count mismatch");
            let (canon, factor) = p.canonical_split();
            *merged
                .entry((canon.x_mask(), canon.z_mask()))
                .or_insert(Complex64::new(0.0, 0.0)) += c * factor;
        }
        self.terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|((x, z), c)| (c, PauliString::from_masks(self.n_qubits, x, z)))
            .collect();
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All coefficients real within `tol` (canonical form makes this the
    /// Hermiticity test).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|(c, _)| c.im.abs() <= tol)
    }

    /// Union of term supports, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut m = 0u64;
        for (_, p) in &self.terms {
            m |= p.x_mask() | p.z_mask();
        }
        (0..self.n_qubits).filter(|q| m >> q & 1 == 1).collect()
    }

    /// Re-index every term onto `domain`; panics if any term acts outside it.
    pub fn restrict(&self, domain: &[usize]) -> PauliSum {
        PauliSum::from_terms(
            domain.len(),
            self.terms
                .iter()
                .map(|(c, p)| (*c, p.restrict(domain)))
                .collect(),
        )
    }

    /// Dense matrix realization. Guarded at [`MAX_DENSE_QUBITS`].
    pub fn to_matrix(&self) -> Array2<Complex64> {
        assert!(
            self.n_qubits <= MAX_DENSE_QUBITS,
            "refusing to materialize a 2^{} dense matrix",
            self.n_qubits
        );
        let dim = 1usize << self.n_qubits;
        let mut m = Array2::zeros((dim, dim));
        for (c, p) in &self.terms {
            let xm = index_mask(p.x_mask(), self.n_qubits) as usize;
            let zm = index_mask(p.z_mask(), self.n_qubits);
            let scale = c * p.phase();
            for col in 0..dim {
                let sign = if ((zm & col as u64).count_ones() & 1) == 1 {
                    -1.0
                } else {
                    1.0
                };
                m[[col ^ xm, col]] += scale * sign;
            }
        }
        m
    }

    /// Text form: one `coefficient pauli-word` line per term, e.g.
    /// `-1 ZZIIIIII`. Requires real coefficients (within 1e-12).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, p) in &self.terms {
            assert!(
                c.im.abs() <= 1e-12,
                "text form only supports real coefficients"
            );
            out.push_str(&format!("{:.17} {}\n", c.re, p));
        }
        out
    }

    /// Parse the [`to_text`](Self::to_text) format. Blank lines and `#`
    /// comments are allowed. Returns `(line_number, message)` on failure.
    pub fn from_text(text: &str) -> Result<PauliSum, (usize, String)> {
        let mut n_qubits: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split_whitespace();
            let coeff_s = parts.next().unwrap();
            let word = parts
                .next()
                .ok_or_else(|| (lineno, "expected `coefficient pauli-word`".to_string()))?;
            if parts.next().is_some() {
                return Err((lineno, "trailing content after pauli word".to_string()));
            }
            let coeff: f64 = coeff_s
                .parse()
                .map_err(|_| (lineno, format!("invalid coefficient `{coeff_s}`")))?;
            let n = word.chars().count();
            match n_qubits {
                None => n_qubits = Some(n),
                Some(prev) if prev != n => {
                    return Err((lineno, format!("word length {n} != {prev} of earlier terms")));
                }
                _ => {}
            }
            for sym in word.chars() {
                if !matches!(sym, 'I' | 'X' | 'Y' | 'Z') {
                    return Err((lineno, format!("invalid Pauli symbol `{sym}`")));
                }
            }
            terms.push((
                Complex64::new(coeff, 0.0),
                PauliString::from_symbols(word),
            ));
        }
        let n = n_qubits.ok_or((0, "no terms found".to_string()))?;
        Ok(PauliSum::from_terms(n, terms))
    }
}
