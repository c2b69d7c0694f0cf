//! Compiles H/T/CNOT circuits into a code state, a layer of `Z` rotations
//! and an all-zero `X`-basis postselection whose amplitude reproduces
//! `<0^n|Q|0^n>`.
//!
//! Construction. Each Hadamard introduces a path variable and every wire
//! carries a linear form in those variables. A `T` on a wire with form `a`
//! contributes `ω^a`, `ω = e^{iπ/4}`, and costs one rotated qubit holding
//! `a`. A Hadamard on form `a` creating variable `v` contributes
//! `(-1)^{av} = i^a i^v i^{-(a⊕v)}`, realized as `S` on `a`, `S` on `v` and
//! `S^† = T^6` on `a⊕v`: ten rotated copies, plus one qubit for the new
//! wire and one for `a⊕v`, twelve in all. The final `<0^n|` restricts the
//! variables to the kernel of the final wire forms; the `n` data qubits
//! hold those (identically zero) forms. Every qubit holds a linear form of
//! the kernel coordinates, so the prepared state is a uniform superposition
//! over the row space of a generator matrix.
//!
//! Rotations are `exp(-iπ/8 Z) = e^{-iπ/8} T`, so compiled instances carry
//! `theta = -π/8`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::oracle::{oracle_statevector, Preparation, Statevector, ORACLE_QUBIT_CAP};

/// Rotation angle of every compiled instance.
pub const COMPILED_THETA: f64 = -std::f64::consts::PI / 8.0;

/// Qubits per Hadamard gadget.
pub const HADAMARD_GADGET_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    T(usize),
    Cnot(usize, usize),
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::T(q) => write!(f, "T {q}"),
            Gate::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl GateCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            let ok = match *g {
                Gate::H(q) | Gate::T(q) => q < n,
                Gate::Cnot(a, b) => a < n && b < n && a != b,
            };
            if !ok {
                return Err(HcsError::InvalidParameter(format!("gate `{g}` is invalid on {n} qubits")));
            }
        }
        Ok(Self { n, gates })
    }

    /// Parses one gate per line (`H q`, `T q`, `CNOT a b`). Blank lines and
    /// `#` comments are skipped. Without `n`, the register is sized to the
    /// largest index used.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| HcsError::Parse { line: i + 1, message };
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap_or_default();
            let args = parts
                .map(|p| p.parse::<usize>().map_err(|e| parse_err(format!("bad qubit {p:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let gate = match (op.to_ascii_uppercase().as_str(), args.as_slice()) {
                ("H", [q]) => Gate::H(*q),
                ("T", [q]) => Gate::T(*q),
                ("CNOT", [a, b]) => Gate::Cnot(*a, *b),
                _ => return Err(parse_err(format!("unsupported gate `{line}`"))),
            };
            gates.push(gate);
        }
        let used = gates
            .iter()
            .map(|g| match *g {
                Gate::H(q) | Gate::T(q) => q + 1,
                Gate::Cnot(a, b) => a.max(b) + 1,
            })
            .max()
            .unwrap_or(0);
        Self::new(n.unwrap_or(used), gates)
    }

    /// A random circuit with exactly the given gate counts.
    pub fn random<R: Rng + ?Sized>(n: usize, h: usize, t: usize, cnots: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut kinds: Vec<u8> = std::iter::repeat_n(0, h)
            .chain(std::iter::repeat_n(1, t))
            .chain(std::iter::repeat_n(2, if n > 1 { cnots } else { 0 }))
            .collect();
        kinds.shuffle(rng);
        let gates = kinds
            .into_iter()
            .map(|k| match k {
                0 => Gate::H(rng.random_range(0..n)),
                1 => Gate::T(rng.random_range(0..n)),
                _ => {
                    let a = rng.random_range(0..n);
                    let b = (a + rng.random_range(1..n)) % n;
                    Gate::Cnot(a, b)
                }
            })
            .collect();
        Self { n, gates }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn h_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(_))).count()
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::T(_))).count()
    }

    /// `<0^n|Q|0^n>` by direct gate-by-gate simulation.
    pub fn zero_amplitude(&self) -> Result<Complex64> {
        let mut sv = Statevector::zero(self.n)?;
        for g in &self.gates {
            match *g {
                Gate::H(q) => sv.h(q),
                Gate::T(q) => sv.t(q),
                Gate::Cnot(a, b) => sv.cnot(a, b),
            }
        }
        Ok(sv.amplitude(0))
    }
}

impl fmt::Display for GateCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for GateCircuit {
    type Err = HcsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

/// `n + t + 12h`.
pub fn qubit_budget(circuit: &GateCircuit) -> usize {
    circuit.n() + circuit.t_count() + HADAMARD_GADGET_QUBITS * circuit.h_count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledInstance {
    /// Total qubits.
    pub m: usize,
    /// Qubits of the source circuit; they come first.
    pub n: usize,
    pub theta: f64,
    /// Generator of the code whose uniform superposition is prepared.
    pub generator: BitMatrix,
    /// `|+>` inputs and CNOT network preparing that state.
    pub prep: Preparation,
    pub rotation_mask: BitVector,
    pub postselect_mask: BitVector,
    pub postselect_values: BitVector,
    /// Postselected amplitude divided by this equals `<0^n|Q|0^n>`.
    pub norm: Complex64,
}

pub fn compile(circuit: &GateCircuit) -> Result<CompiledInstance> {
    let n = circuit.n();
    let vars = circuit.h_count();
    let mut wires = vec![BitVector::zeros(vars); n];
    // (form, rotated) for each gadget qubit in gate order
    let mut gadget: Vec<(BitVector, bool)> = Vec::new();
    let mut next_var = 0;
    for g in circuit.gates() {
        match *g {
            Gate::Cnot(a, b) => {
                let control = wires[a].clone();
                wires[b].xor_assign(&control);
            }
            Gate::T(q) => gadget.push((wires[q].clone(), true)),
            Gate::H(q) => {
                let a = wires[q].clone();
                let v = BitVector::unit(vars, next_var);
                next_var += 1;
                let sum = a.xor(&v);
                gadget.push((v.clone(), false));
                gadget.push((sum.clone(), false));
                for (form, copies) in [(&a, 2), (&v, 2), (&sum, 6)] {
                    gadget.extend(std::iter::repeat_n((form.clone(), true), copies));
                }
                wires[q] = v;
            }
        }
    }
    let forms: Vec<(BitVector, bool)> = wires
        .iter()
        .map(|w| (w.clone(), false))
        .chain(gadget)
        .collect();
    let m = forms.len();
    debug_assert_eq!(m, qubit_budget(circuit));

    // Coordinates of the kernel of the final wire forms.
    let finals = BitMatrix::from_rows(vars, wires)?;
    let kernel = finals.nullspace_basis();
    let r = kernel.nrows();
    let mut columns = BitMatrix::zeros(vars, m);
    let mut rotation_mask = BitVector::zeros(m);
    for (j, (form, rotated)) in forms.iter().enumerate() {
        for i in form.iter_ones() {
            columns.set(i, j, true);
        }
        rotation_mask.set(j, *rotated);
    }
    let generator = kernel.mul(&columns);
    debug_assert_eq!(generator.rank(), r);
    let prep = Preparation::code_state(&generator);

    let rotated = rotation_mask.weight() as f64;
    let magnitude = (2f64).powf((vars as f64 - m as f64 - r as f64) / 2.0);
    let norm = Complex64::from_polar(magnitude, COMPILED_THETA * rotated);
    Ok(CompiledInstance {
        m,
        n,
        theta: COMPILED_THETA,
        generator,
        prep,
        rotation_mask,
        postselect_mask: BitVector::ones(m),
        postselect_values: BitVector::zeros(m),
        norm,
    })
}

/// Amplitude of the postselected pattern, from the dense oracle.
pub fn postselected_amplitude(ci: &CompiledInstance) -> Result<Complex64> {
    if ci.m > ORACLE_QUBIT_CAP {
        return Err(HcsError::SizeCap {
            what: "compiled qubits",
            value: ci.m,
            cap: ORACLE_QUBIT_CAP,
        });
    }
    let state = oracle_statevector(&ci.prep, ci.theta, &ci.rotation_mask)?;
    Ok(state.amplitude(&ci.postselect_values))
}

/// `|postselected amplitude / norm - <0^n|Q|0^n>|`.
pub fn verify_compiled(ci: &CompiledInstance, circuit: &GateCircuit) -> Result<f64> {
    let compiled = postselected_amplitude(ci)? / ci.norm;
    Ok((compiled - circuit.zero_amplitude()?).norm())
}
