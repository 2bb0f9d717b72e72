//! The `LSC1` binary container.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "LSC1"
//!      4     1  version (0x01)
//!      5     1  field kind: 0 = prime, 1 = GF(2^8)
//!      6     4  prime p, or reduction polynomial (LE)
//!     10     4  n (LE)
//!     14     4  k (LE)
//!     18     1  payload kind: 0 syndrome, 1 phase1, 2 phase2, 3 matrix, 4 plaintext
//!     19     4  row count for matrices; envelope length for phase2; else 0 (LE)
//!     23     8  symbol count (LE)
//!     31     -  phase2 envelope bytes, then symbols: 1 byte each if q <= 256,
//!               else 2 bytes LE
//! ```

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldKind, FieldSpec};
use crate::linalg::Matrix;
use crate::lsc::Syndrome;
use crate::scheme::{CipherKind, TwoPhaseBundle};

pub const MAGIC: &[u8; 4] = b"LSC1";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 31;

/// Length of the PRG seed envelope carried by phase-2 payloads.
pub const SEED_ENVELOPE_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum PayloadKind {
    Syndrome = 0,
    Phase1 = 1,
    Phase2 = 2,
    Matrix = 3,
    Plaintext = 4,
}

impl PayloadKind {
    pub const ALL: [PayloadKind; 5] = [
        PayloadKind::Syndrome,
        PayloadKind::Phase1,
        PayloadKind::Phase2,
        PayloadKind::Matrix,
        PayloadKind::Plaintext,
    ];

    fn from_byte(b: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| *k as u8 == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub field: FieldSpec,
    pub n: u32,
    pub k: u32,
    pub kind: PayloadKind,
    /// Matrix row count, or phase-2 envelope length; zero otherwise.
    pub rows: u32,
    pub envelope: Vec<u8>,
    pub symbols: Vec<FieldElement>,
}

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

fn symbol_width(field: &FieldSpec) -> usize {
    if field.order() <= 256 {
        1
    } else {
        2
    }
}

impl Container {
    pub fn matrix(m: &Matrix, n: usize, k: usize) -> Self {
        Self {
            field: m.field().clone(),
            n: n as u32,
            k: k as u32,
            kind: PayloadKind::Matrix,
            rows: m.rows() as u32,
            envelope: Vec::new(),
            symbols: m.elements().to_vec(),
        }
    }

    /// `H` of a code.
    pub fn parity_check(code: &CodeSpec) -> Self {
        Self::matrix(code.parity_check(), code.n(), code.k())
    }

    pub fn syndrome(code: &CodeSpec, s: &Syndrome) -> Self {
        Self::symbols_of(code, PayloadKind::Syndrome, s.symbols().to_vec())
    }

    pub fn phase1(code: &CodeSpec, bundle: &TwoPhaseBundle) -> Self {
        Self::symbols_of(code, PayloadKind::Phase1, bundle.phase1.symbols().to_vec())
    }

    pub fn phase2(code: &CodeSpec, bundle: &TwoPhaseBundle) -> Self {
        let mut c = Self::symbols_of(code, PayloadKind::Phase2, bundle.phase2.clone());
        if let Some(env) = bundle.seed_envelope {
            c.envelope = env.to_vec();
            c.rows = SEED_ENVELOPE_LEN as u32;
        }
        c
    }

    pub fn plaintext(field: &FieldSpec, symbols: Vec<FieldElement>) -> Self {
        Self {
            field: field.clone(),
            n: symbols.len() as u32,
            k: 0,
            kind: PayloadKind::Plaintext,
            rows: 0,
            envelope: Vec::new(),
            symbols,
        }
    }

    fn symbols_of(code: &CodeSpec, kind: PayloadKind, symbols: Vec<FieldElement>) -> Self {
        Self {
            field: code.field().clone(),
            n: code.n() as u32,
            k: code.k() as u32,
            kind,
            rows: 0,
            envelope: Vec::new(),
            symbols,
        }
    }

    fn expect_kind(&self, kind: PayloadKind) -> Result<()> {
        if self.kind != kind {
            return Err(format_err(
                18,
                format!("expected a {kind:?} payload, found {:?}", self.kind),
            ));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        self.expect_kind(PayloadKind::Matrix)?;
        Matrix::from_elements(
            &self.field,
            self.rows as usize,
            self.n as usize,
            self.symbols.clone(),
        )
    }

    /// Reads an `H` container back into a code.
    pub fn to_code(&self) -> Result<CodeSpec> {
        let m = self.to_matrix()?;
        if m.rows() != (self.n - self.k) as usize {
            return Err(format_err(19, "row count is not n - k for a parity check"));
        }
        CodeSpec::from_parity_check(m)
    }

    /// Seed carried by a phase-2 payload, if any.
    pub fn seed_envelope(&self) -> Option<[u8; 8]> {
        self.envelope.as_slice().try_into().ok()
    }

    /// Reassembles a bundle from its two separately delivered halves.
    pub fn to_bundle(phase1: &Container, phase2: &Container) -> Result<TwoPhaseBundle> {
        phase1.expect_kind(PayloadKind::Phase1)?;
        phase2.expect_kind(PayloadKind::Phase2)?;
        if phase1.field != phase2.field || phase1.n != phase2.n || phase1.k != phase2.k {
            return Err(format_err(
                5,
                "phase 1 and phase 2 describe different codes",
            ));
        }
        let seed_envelope = phase2.seed_envelope();
        Ok(TwoPhaseBundle {
            phase1: Syndrome::new(phase1.symbols.clone()),
            phase2: phase2.symbols.clone(),
            cipher: if seed_envelope.is_some() {
                CipherKind::PrgStream
            } else {
                CipherKind::OneTimePad
            },
            seed_envelope,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let width = symbol_width(&self.field);
        let mut out =
            Vec::with_capacity(HEADER_LEN + self.envelope.len() + width * self.symbols.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(match self.field.kind() {
            FieldKind::Prime => 0,
            FieldKind::BinaryExtension => 1,
        });
        out.extend_from_slice(&self.field.param().to_le_bytes());
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.k.to_le_bytes());
        out.push(self.kind as u8);
        out.extend_from_slice(&self.rows.to_le_bytes());
        out.extend_from_slice(&(self.symbols.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.envelope);
        for s in &self.symbols {
            if width == 1 {
                out.push(s.value() as u8);
            } else {
                out.extend_from_slice(&s.value().to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(format_err(bytes.len(), "truncated header"));
        }
        if &bytes[0..4] != MAGIC {
            return Err(format_err(0, "bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(format_err(4, format!("unsupported version {}", bytes[4])));
        }
        let param = read_u32(bytes, 6);
        let field = match bytes[5] {
            0 => FieldSpec::prime(param),
            1 => FieldSpec::binary_extension(param),
            other => return Err(format_err(5, format!("unknown field kind {other}"))),
        }
        .map_err(|e| format_err(6, e.to_string()))?;
        let n = read_u32(bytes, 10);
        let k = read_u32(bytes, 14);
        if k > n {
            return Err(format_err(14, format!("k = {k} exceeds n = {n}")));
        }
        let kind = PayloadKind::from_byte(bytes[18])
            .ok_or_else(|| format_err(18, format!("unknown payload kind {}", bytes[18])))?;
        let rows = read_u32(bytes, 19);
        let count = u64::from_le_bytes(bytes[23..31].try_into().expect("8 bytes"));

        let envelope_len = match kind {
            PayloadKind::Matrix => 0,
            PayloadKind::Phase2 if rows == 0 || rows as usize == SEED_ENVELOPE_LEN => rows as usize,
            PayloadKind::Phase2 => {
                return Err(format_err(19, format!("bad envelope length {rows}")));
            }
            _ if rows != 0 => {
                return Err(format_err(19, "row count must be zero for this payload"));
            }
            _ => 0,
        };
        let expected_count = match kind {
            PayloadKind::Syndrome | PayloadKind::Phase1 => (n - k) as u64,
            PayloadKind::Phase2 => k as u64,
            PayloadKind::Matrix => rows as u64 * n as u64,
            PayloadKind::Plaintext => n as u64,
        };
        if count != expected_count {
            return Err(format_err(
                23,
                format!("symbol count {count} does not match header (expected {expected_count})"),
            ));
        }

        let width = symbol_width(&field);
        let body_len = (count as u128) * width as u128 + envelope_len as u128;
        let actual = (bytes.len() - HEADER_LEN) as u128;
        if actual != body_len {
            return Err(format_err(
                HEADER_LEN.min(bytes.len()) + actual.min(body_len) as usize,
                format!("body is {actual} bytes, header declares {body_len}"),
            ));
        }

        let envelope = bytes[HEADER_LEN..HEADER_LEN + envelope_len].to_vec();
        let start = HEADER_LEN + envelope_len;
        let mut symbols = Vec::with_capacity(count as usize);
        for i in 0..count as usize {
            let at = start + i * width;
            let raw = if width == 1 {
                bytes[at] as u64
            } else {
                u16::from_le_bytes([bytes[at], bytes[at + 1]]) as u64
            };
            let s = field.element(raw).map_err(|_| {
                format_err(
                    at,
                    format!("symbol {raw} is not below q = {}", field.order()),
                )
            })?;
            symbols.push(s);
        }
        Ok(Self {
            field,
            n,
            k,
            kind,
            rows,
            envelope,
            symbols,
        })
    }
}
