//! Dense complex state-vector simulator.
//!
//! Amplitudes are indexed with qubit 0 as the most significant bit, matching
//! the tensor-factor convention of [`crate::pauli`]. States are immutable
//! values; every operation returns a fresh vector.

use crate::pauli::{index_mask, PauliString, PauliSum};
use ndarray::Array2;
use num_complex::Complex64;

/// Default memory guard: refuse to allocate states beyond this qubit count.
pub const MAX_STATE_QUBITS: usize = 24;

/// A normalized (unless stated otherwise) complex amplitude vector over
/// `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state from a bitstring like `"0100"`, one bit per
    /// qubit, qubit 0 first.
    pub fn basis_state(n: usize, bits: &str) -> StateVector {
        assert!(n >= 1, "need at least one qubit");
        assert!(
            n <= MAX_STATE_QUBITS,
            "state of {n} qubits exceeds the memory guard ({MAX_STATE_QUBITS})"
        );
        assert_eq!(bits.chars().count(), n, "bitstring length must equal qubit count");
        let mut idx = 0usize;
        for (q, b) in bits.chars().enumerate() {
            match b {
                '0' => {}
                '1' => idx |= 1 << (n - 1 - q),
                other => panic!("invalid bit '{other}' in \"{bits}\""),
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[idx] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits: n, amps }
    }

    /// The all-zeros state `|0…0⟩`.
    pub fn zero_state(n: usize) -> StateVector {
        Self::basis_state(n, &"0".repeat(n))
    }

    /// Wrap raw amplitudes (not normalized).
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> StateVector {
        assert!(n >= 1 && n <= MAX_STATE_QUBITS);
        assert_eq!(amps.len(), 1 << n, "amplitude count must be 2^n");
        StateVector { n_qubits: n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.n_qubits, other.n_qubits, "state size mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Apply a Pauli string as an index permutation plus per-amplitude phase.
    pub fn apply_pauli(&self, p: &PauliString) -> StateVector {
        assert_eq!(self.n_qubits, p.n_qubits(), "state/operator size mismatch");
        let n = self.n_qubits;
        let xm = index_mask(p.x_mask(), n) as usize;
        let zm = index_mask(p.z_mask(), n);
        let ph = p.phase();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (k, &a) in self.amps.iter().enumerate() {
            let sign = if ((zm & k as u64).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            out[k ^ xm] = ph * sign * a;
        }
        StateVector {
            n_qubits: n,
            amps: out,
        }
    }

    /// `op|self⟩` as an unnormalized vector.
    pub fn apply_pauli_sum(&self, op: &PauliSum) -> StateVector {
        assert_eq!(self.n_qubits, op.n_qubits(), "state/operator size mismatch");
        let n = self.n_qubits;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (c, p) in op.terms() {
            let xm = index_mask(p.x_mask(), n) as usize;
            let zm = index_mask(p.z_mask(), n);
            let scale = c * p.phase();
            for (k, &a) in self.amps.iter().enumerate() {
                let sign = if ((zm & k as u64).count_ones() & 1) == 1 {
                    -1.0
                } else {
                    1.0
                };
                out[k ^ xm] += scale * sign * a;
            }
        }
        StateVector {
            n_qubits: n,
            amps: out,
        }
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &PauliSum) -> Complex64 {
        self.inner(&self.apply_pauli_sum(op))
    }

    /// Scale every amplitude.
    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// Unit-norm copy and the pre-normalization Euclidean norm.
    pub fn normalized(&self) -> (StateVector, f64) {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        (self.scaled(Complex64::new(1.0 / norm, 0.0)), norm)
    }

    /// Apply a dense `2^D × 2^D` matrix on the listed qubits (identity
    /// elsewhere). `domain[0]` is the most significant bit of the local
    /// index, matching the global convention.
    pub fn apply_dense_on_domain(&self, m: &Array2<Complex64>, domain: &[usize]) -> StateVector {
        let n = self.n_qubits;
        let d = domain.len();
        assert!(d >= 1 && d <= n, "domain size out of range");
        assert_eq!(m.dim(), (1 << d, 1 << d), "matrix dimension must be 2^D");
        let (spread, rest_positions) = domain_tables(n, domain);

        let dim = 1usize << d;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut sub = vec![Complex64::new(0.0, 0.0); dim];
        for rest in 0..1usize << (n - d) {
            let mut base = 0usize;
            for (bit, &pos) in rest_positions.iter().enumerate() {
                if rest >> bit & 1 == 1 {
                    base |= 1 << pos;
                }
            }
            for (r, s) in sub.iter_mut().enumerate() {
                *s = self.amps[base | spread[r]];
            }
            for r in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, s) in sub.iter().enumerate() {
                    acc += m[[r, c]] * s;
                }
                out[base | spread[r]] = acc;
            }
        }
        StateVector {
            n_qubits: n,
            amps: out,
        }
    }

    /// `Σ_k |⟨ref_k|self⟩|²` over an orthonormal reference basis. Panics if
    /// the basis is not orthonormal within 1e-10.
    pub fn fidelity(&self, reference_basis: &[StateVector]) -> f64 {
        assert!(!reference_basis.is_empty(), "empty reference basis");
        for (i, a) in reference_basis.iter().enumerate() {
            for (j, b) in reference_basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = a.inner(b);
                assert!(
                    (got - want).norm() <= 1e-10,
                    "reference basis not orthonormal: |⟨{i}|{j}⟩ - {want}| = {:e}",
                    (got - want).norm()
                );
            }
        }
        reference_basis
            .iter()
            .map(|r| r.inner(self).norm_sqr())
            .sum()
    }

    /// Debug dump: little-endian `f64` (re, im) pairs in index order. Not a
    /// stability contract.
    pub fn write_amplitudes<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Precompute, for a domain, the spread table mapping each local index to its
/// global bit pattern, plus the bit positions of the non-domain qubits.
fn domain_tables(n: usize, domain: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let d = domain.len();
    let mut seen = 0u64;
    let mut gpos = Vec::with_capacity(d);
    for &q in domain {
        assert!(q < n, "domain qubit {q} out of range");
        assert!(seen >> q & 1 == 0, "duplicate domain qubit {q}");
        seen |= 1 << q;
        gpos.push(n - 1 - q);
    }
    let dim = 1usize << d;
    let mut spread = vec![0usize; dim];
    for (r, s) in spread.iter_mut().enumerate() {
        for (i, &pos) in gpos.iter().enumerate() {
            // local bit for domain[i] sits at position d-1-i
            if r >> (d - 1 - i) & 1 == 1 {
                *s |= 1 << pos;
            }
        }
    }
    let rest_positions: Vec<usize> = (0..n)
        .rev()
        .map(|q| n - 1 - q)
        .filter(|pos| !gpos.contains(pos))
        .collect();
    (spread, rest_positions)
}

/// Cross Gram matrix of two states on a qubit domain:
/// `G[r][r'] = Σ_rest a[r,rest]·conj(b[r',rest])`, so that for an operator
/// `P` supported on the domain, `⟨b|P|a⟩ = Σ_{r',r} P[r',r]·G[r][r']`.
///
/// With `a == b` this is the reduced density matrix of the domain (up to
/// transposition conventions) and drives the S-matrix assembly in
/// [`crate::qite`].
pub fn domain_gram(a: &StateVector, b: &StateVector, domain: &[usize]) -> Array2<Complex64> {
    assert_eq!(a.n_qubits(), b.n_qubits(), "state size mismatch");
    let n = a.n_qubits();
    let d = domain.len();
    let (spread, rest_positions) = domain_tables(n, domain);
    let dim = 1usize << d;
    let mut g = Array2::zeros((dim, dim));
    for rest in 0..1usize << (n - d) {
        let mut base = 0usize;
        for (bit, &pos) in rest_positions.iter().enumerate() {
            if rest >> bit & 1 == 1 {
                base |= 1 << pos;
            }
        }
        for r in 0..dim {
            let ar = a.amps[base | spread[r]];
            if ar == Complex64::new(0.0, 0.0) {
                continue;
            }
            for rp in 0..dim {
                g[[r, rp]] += ar * b.amps[base | spread[rp]].conj();
            }
        }
    }
    g
}

/// `⟨b|P|a⟩` evaluated from a precomputed [`domain_gram`] of `(a, b)` and a
/// Pauli string `p` already restricted to the same domain.
pub fn gram_bracket(g: &Array2<Complex64>, p: &PauliString) -> Complex64 {
    let d = p.n_qubits();
    let dim = 1usize << d;
    assert_eq!(g.dim(), (dim, dim), "gram/string dimension mismatch");
    let xm = index_mask(p.x_mask(), d) as usize;
    let zm = index_mask(p.z_mask(), d);
    let ph = p.phase();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        let sign = if ((zm & r as u64).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        acc += sign * g[[r, r ^ xm]];
    }
    ph * acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::{array, Array1, Array2};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        StateVector::from_amplitudes(n, amps).normalized().0
    }

    // Dense oracle pieces, independent of the pauli module internals.
    fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
        let (ar, ac) = a.dim();
        let (br, bc) = b.dim();
        let mut out = Array2::zeros((ar * br, ac * bc));
        for i in 0..ar {
            for j in 0..ac {
                for k in 0..br {
                    for l in 0..bc {
                        out[[i * br + k, j * bc + l]] = a[[i, j]] * b[[k, l]];
                    }
                }
            }
        }
        out
    }

    fn eye(dim: usize) -> Array2<Complex64> {
        Array2::from_diag_elem(dim, c(1.0, 0.0))
    }

    fn as_array(s: &StateVector) -> Array1<Complex64> {
        Array1::from_vec(s.amplitudes().to_vec())
    }

    #[test]
    fn basis_state_examples() {
        let s = StateVector::basis_state(1, "0");
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = StateVector::basis_state(8, "00000000");
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0);
        assert_eq!(s.amplitudes().len(), 256);

        // qubit-0-major: "01" puts the 1 on qubit 1 → index 1
        let s = StateVector::basis_state(2, "01");
        assert_abs_diff_eq!(s.amplitudes()[1].re, 1.0);
    }

    #[test]
    fn apply_pauli_single_qubit_cases() {
        let zero = StateVector::basis_state(1, "0");
        let one = StateVector::basis_state(1, "1");

        let x = PauliString::from_symbols("X");
        assert_eq!(zero.apply_pauli(&x), one);

        let plus = StateVector::from_amplitudes(
            1,
            vec![c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)],
        );
        let z = PauliString::from_symbols("Z");
        let got = plus.apply_pauli(&z);
        assert_abs_diff_eq!(got.amplitudes()[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(got.amplitudes()[1].re, -1.0 / 2f64.sqrt(), epsilon = 1e-15);

        let y = PauliString::from_symbols("Y");
        let got = zero.apply_pauli(&y);
        assert_abs_diff_eq!(got.amplitudes()[1].im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn inner_examples() {
        let zero = StateVector::basis_state(1, "0");
        let one = StateVector::basis_state(1, "1");
        assert_abs_diff_eq!(zero.inner(&zero).re, 1.0);
        assert_abs_diff_eq!(zero.inner(&one).norm(), 0.0);

        let s = StateVector::from_amplitudes(
            1,
            vec![c(1.0 / 2f64.sqrt(), 0.0), c(0.0, 1.0 / 2f64.sqrt())],
        );
        let got = zero.inner(&s);
        assert_abs_diff_eq!(got.re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let zero = StateVector::basis_state(1, "0");
        let z_sum = PauliSum::from_terms(1, vec![(c(1.0, 0.0), PauliString::from_symbols("Z"))]);
        assert_abs_diff_eq!(zero.expectation(&z_sum).re, 1.0);

        let plus = StateVector::from_amplitudes(
            1,
            vec![c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)],
        );
        let x_sum = PauliSum::from_terms(1, vec![(c(1.0, 0.0), PauliString::from_symbols("X"))]);
        assert_abs_diff_eq!(plus.expectation(&x_sum).re, 1.0, epsilon = 1e-15);

        // TFIM N=2, J=1, g=1 on |00⟩ → −1 (dense oracle below confirms)
        let h = PauliSum::from_terms(
            2,
            vec![
                (c(-1.0, 0.0), PauliString::from_symbols("ZZ")),
                (c(1.0, 0.0), PauliString::from_symbols("XI")),
                (c(1.0, 0.0), PauliString::from_symbols("IX")),
            ],
        );
        let s00 = StateVector::basis_state(2, "00");
        assert_abs_diff_eq!(s00.expectation(&h).re, -1.0, epsilon = 1e-14);
        // dense check
        let hm = h.to_matrix();
        let v = as_array(&s00);
        let hv = hm.dot(&v);
        let e: Complex64 = v.iter().zip(hv.iter()).map(|(a, b)| a.conj() * b).sum();
        assert_abs_diff_eq!(e.re, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn dense_on_domain_examples() {
        let s = random_state(3, 7);
        let id = eye(4);
        assert_eq!(s.apply_dense_on_domain(&id, &[0, 2]), s);

        let x = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let s00 = StateVector::basis_state(2, "00");
        let got = s00.apply_dense_on_domain(&x, &[1]);
        assert_eq!(got, StateVector::basis_state(2, "01"));
    }

    #[test]
    fn dense_on_domain_matches_kron_oracle() {
        // random 4x4 unitary-ish matrix (not necessarily unitary: oracle
        // equality holds for any matrix)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut m = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                m[[i, j]] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let s = random_state(3, 13);
        let got = s.apply_dense_on_domain(&m, &[0, 1]);
        // qubits {0,1} are the two most significant index bits
        let full = kron(&m, &eye(2));
        let want = full.dot(&as_array(&s));
        for (a, b) in as_array(&got).iter().zip(want.iter()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }

        // non-adjacent domain {0,2} against a permuted Kronecker oracle
        let got = s.apply_dense_on_domain(&m, &[2, 0]);
        // build full operator by summing |r'⟩⟨r| structure explicitly
        let mut full = Array2::<Complex64>::zeros((8, 8));
        for col in 0..8usize {
            // local index: domain[0]=2 → bit n-1-2=0; domain[1]=0 → bit 2
            let loc = ((col >> 0 & 1) << 1) | (col >> 2 & 1);
            for locr in 0..4usize {
                let row = (col & 0b010) | ((locr >> 1 & 1) << 0) | ((locr & 1) << 2);
                full[[row, col]] += m[[locr, loc]];
            }
        }
        let want = full.dot(&as_array(&s));
        for (a, b) in as_array(&got).iter().zip(want.iter()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn normalize_examples() {
        let s = StateVector::from_amplitudes(1, vec![c(2.0, 0.0), c(0.0, 0.0)]);
        let (unit, norm) = s.normalized();
        assert_abs_diff_eq!(norm, 2.0);
        assert_abs_diff_eq!(unit.amplitudes()[0].re, 1.0);

        let s = StateVector::from_amplitudes(1, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let (unit, norm) = s.normalized();
        assert_abs_diff_eq!(norm, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(unit.amplitudes()[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    #[should_panic(expected = "zero vector")]
    fn normalize_rejects_zero() {
        StateVector::from_amplitudes(1, vec![c(0.0, 0.0), c(0.0, 0.0)])
            .normalized();
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis_state(1, "0");
        let one = StateVector::basis_state(1, "1");
        assert_abs_diff_eq!(zero.fidelity(&[zero.clone()]), 1.0);
        assert_abs_diff_eq!(zero.fidelity(&[one.clone()]), 0.0);

        let plus = StateVector::from_amplitudes(
            1,
            vec![c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)],
        );
        assert_abs_diff_eq!(zero.fidelity(&[plus]), 0.5, epsilon = 1e-14);
    }

    #[test]
    #[should_panic(expected = "not orthonormal")]
    fn fidelity_rejects_bad_basis() {
        let zero = StateVector::basis_state(1, "0");
        zero.fidelity(&[zero.clone(), zero.clone()]);
    }

    #[test]
    fn gram_bracket_matches_expectation() {
        let s = random_state(4, 21);
        let domain = [1usize, 2];
        let g = domain_gram(&s, &s, &domain);
        for p in crate::pauli::enumerate_strings(&domain, 4, true) {
            let want = s.inner(&s.apply_pauli(&p));
            let got = gram_bracket(&g, &p.restrict(&domain));
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn cross_gram_bracket_matches_direct() {
        let a = random_state(3, 31);
        let b = random_state(3, 37);
        let domain = [0usize, 2];
        let g = domain_gram(&a, &b, &domain);
        for p in crate::pauli::enumerate_strings(&domain, 3, true) {
            let want = b.inner(&a.apply_pauli(&p));
            let got = gram_bracket(&g, &p.restrict(&domain));
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn canonical_pauli_is_involutive(seed in 0u64..u64::MAX, n in 1usize..=3) {
            let s = random_state(n, seed);
            let mask = (1u64 << n) - 1;
            let p = PauliString::from_masks(n, seed & mask, (seed >> 8) & mask);
            let back = s.apply_pauli(&p).apply_pauli(&p);
            for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }

        #[test]
        fn expectation_is_global_phase_invariant(seed in 0u64..u64::MAX, phi in 0.0..std::f64::consts::TAU) {
            let s = random_state(2, seed);
            let h = PauliSum::from_terms(2, vec![
                (c(-1.0, 0.0), PauliString::from_symbols("ZZ")),
                (c(0.7, 0.0), PauliString::from_symbols("XI")),
            ]);
            let rotated = s.scaled(Complex64::from_polar(1.0, phi));
            let a = s.expectation(&h);
            let b = rotated.expectation(&h);
            prop_assert!((a - b).norm() <= 1e-12);
        }

        #[test]
        fn unitary_domain_application_preserves_inner(seed in 0u64..u64::MAX) {
            // unitary from a Pauli rotation exp(-iθX/2) on one qubit
            let theta = (seed % 1000) as f64 / 500.0;
            let (cth, sth) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let u = array![
                [c(cth, 0.0), c(0.0, -sth)],
                [c(0.0, -sth), c(cth, 0.0)],
            ];
            let a = random_state(3, seed);
            let b = random_state(3, seed ^ 0xdead_beef);
            let before = a.inner(&b);
            let after = a
                .apply_dense_on_domain(&u, &[1])
                .inner(&b.apply_dense_on_domain(&u, &[1]));
            prop_assert!((before - after).norm() <= 1e-10);
        }
    }
}
