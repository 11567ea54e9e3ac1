//! Pauli operators, the transverse Ising chain, and a small text format for
//! grouped Pauli-string Hamiltonians.
//!
//! Format: `N | group | group ...`, each group a `;`-separated list of
//! Pauli strings with an optional real coefficient in front:
//!
//! ```text
//! 2 | z. ; .z | 0.5 xx
//! ```
//!
//! Strings have one character per qubit from `x`, `y`, `z` and `.` for the
//! identity; site 0 is the leftmost (most significant) factor. Every group
//! becomes one Trotter term. Whitespace, including newlines, is free.

use std::fmt;

use thiserror::Error;

use crate::linalg::{c64, kron, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'x' => Some(Pauli::X),
            'y' => Some(Pauli::Y),
            'z' => Some(Pauli::Z),
            '.' | 'i' => Some(Pauli::I),
            _ => None,
        }
    }

    fn to_char(self) -> char {
        match self {
            Pauli::I => '.',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("Ising chain needs at least 2 qubits, got {0}")]
    ChainTooShort(usize),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, HamiltonianError>;

/// Tensor product of single-qubit Paulis, site 0 leftmost.
pub fn pauli_string(ops: &[Pauli]) -> ComplexMatrix {
    ops.iter().fold(ComplexMatrix::identity(1), |acc, p| kron(&acc, &p.matrix()))
}

/// `axis` on `site`, identity elsewhere.
pub fn pauli_embed(axis: Pauli, site: usize, n: usize) -> Result<ComplexMatrix> {
    if site >= n {
        return Err(HamiltonianError::SiteOutOfRange { site, n });
    }
    let mut ops = vec![Pauli::I; n];
    ops[site] = axis;
    Ok(pauli_string(&ops))
}

/// `H1 = Σ_r Z_r`, `H2 = Σ_r X_r X_{r+1}` over nearest neighbours; with
/// `periodic` the pair `(N-1, 0)` is included for `N > 2`.
pub fn ising_chain(n: usize, periodic: bool) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if n < 2 {
        return Err(HamiltonianError::ChainTooShort(n));
    }
    let dim = 1 << n;
    let mut h1 = ComplexMatrix::zeros(dim, dim);
    let mut h2 = ComplexMatrix::zeros(dim, dim);
    for r in 0..n {
        h1 = h1 + pauli_embed(Pauli::Z, r, n)?;
    }
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|r| (r, r + 1)).collect();
    if periodic && n > 2 {
        pairs.push((n - 1, 0));
    }
    for (r, s) in pairs {
        let mut ops = vec![Pauli::I; n];
        ops[r] = Pauli::X;
        ops[s] = Pauli::X;
        h2 = h2 + pauli_string(&ops);
    }
    Ok((h1, h2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub ops: Vec<Pauli>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub qubits: usize,
    pub groups: Vec<Vec<PauliTerm>>,
}

impl HamiltonianSpec {
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// One Hermitian matrix per group.
    pub fn terms(&self) -> Vec<ComplexMatrix> {
        self.groups
            .iter()
            .map(|group| {
                group.iter().fold(ComplexMatrix::zeros(self.dim(), self.dim()), |acc, t| {
                    acc + pauli_string(&t.ops).scale_real(t.coefficient)
                })
            })
            .collect()
    }

    /// Sum of all groups.
    pub fn total(&self) -> ComplexMatrix {
        self.terms().into_iter().fold(ComplexMatrix::zeros(self.dim(), self.dim()), |a, b| a + b)
    }
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.qubits)?;
        for group in &self.groups {
            f.write_str(" |")?;
            for (k, t) in group.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ;")?;
                }
                let s: String = t.ops.iter().map(|p| p.to_char()).collect();
                write!(f, " {} {s}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { chars: text.char_indices().peekable(), text, line: 1, column: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.text.len())
    }

    /// Next run of characters that are not whitespace or separators.
    fn word(&mut self) -> (usize, usize, &'a str) {
        let (line, column) = (self.line, self.column);
        let start = self.offset();
        while self.peek().is_some_and(|c| !c.is_whitespace() && c != '|' && c != ';') {
            self.bump();
        }
        let end = self.offset();
        (line, column, &self.text[start..end])
    }

    fn error<T>(&self, line: usize, column: usize, message: impl Into<String>) -> Result<T> {
        Err(HamiltonianError::Parse { line, column, message: message.into() })
    }
}

fn parse_ops(word: &str, qubits: usize, line: usize, column: usize) -> Result<Vec<Pauli>> {
    let mut ops = Vec::with_capacity(word.len());
    for (k, c) in word.chars().enumerate() {
        match Pauli::from_char(c) {
            Some(p) => ops.push(p),
            None => {
                return Err(HamiltonianError::Parse {
                    line,
                    column: column + k,
                    message: format!("unexpected character '{c}' in Pauli string"),
                })
            }
        }
    }
    if ops.len() != qubits {
        return Err(HamiltonianError::Parse {
            line,
            column,
            message: format!("Pauli string '{word}' has length {}, expected {qubits}", ops.len()),
        });
    }
    Ok(ops)
}

/// Parses the grouped Pauli-string format described in the module docs.
pub fn parse_hamiltonian_spec(text: &str) -> Result<HamiltonianSpec> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let (line, column, word) = cur.word();
    if word.is_empty() {
        return cur.error(line, column, "expected the qubit count");
    }
    let qubits: usize = match word.parse() {
        Ok(n) if (1..=16).contains(&n) => n,
        _ => return cur.error(line, column, format!("qubit count must be an integer in 1..=16, got '{word}'")),
    };
    let mut groups = Vec::new();
    cur.skip_ws();
    match cur.peek() {
        Some('|') => {}
        None => return cur.error(cur.line, cur.column, "expected at least one '|'-separated group"),
        Some(c) => return cur.error(cur.line, cur.column, format!("expected '|', found '{c}'")),
    }
    while cur.peek() == Some('|') {
        let (gline, gcol) = (cur.line, cur.column);
        cur.bump();
        let mut group = Vec::new();
        loop {
            cur.skip_ws();
            let (line, column, first) = cur.word();
            if first.is_empty() {
                let message = if group.is_empty() { "empty term group" } else { "empty term after ';'" };
                return cur.error(if group.is_empty() { gline } else { line }, if group.is_empty() { gcol } else { column }, message);
            }
            let term = if first.chars().all(|c| Pauli::from_char(c).is_some()) {
                PauliTerm { coefficient: 1.0, ops: parse_ops(first, qubits, line, column)? }
            } else {
                let coefficient: f64 = match first.parse() {
                    Ok(v) => v,
                    Err(_) => return cur.error(line, column, format!("'{first}' is neither a coefficient nor a Pauli string")),
                };
                if !coefficient.is_finite() {
                    return cur.error(line, column, format!("coefficient '{first}' is not finite"));
                }
                cur.skip_ws();
                let (l2, c2, ops) = cur.word();
                if ops.is_empty() {
                    return cur.error(l2, c2, "expected a Pauli string after the coefficient");
                }
                PauliTerm { coefficient, ops: parse_ops(ops, qubits, l2, c2)? }
            };
            group.push(term);
            cur.skip_ws();
            match cur.peek() {
                Some(';') => {
                    cur.bump();
                }
                Some('|') | None => break,
                Some(c) => return cur.error(cur.line, cur.column, format!("expected ';' or '|', found '{c}'")),
            }
        }
        groups.push(group);
    }
    Ok(HamiltonianSpec { qubits, groups })
}
