//! Code transformations: puncturing, shortening, parity extension, zero
//! lengthening, and the two-stage distance patch that glues an auxiliary
//! code onto a subcode chain.
//!
//! Each transformation exists twice: as a free function with explicit
//! arguments (the primitive), and as a [`Derivation`] strategy object built
//! from a serialized [`DerivationStep`].  The [`DerivationRegistry`] maps
//! step kinds to builders so that pipelines read from disk can be replayed
//! without a match statement at every call site, and so downstream users can
//! register their own transformations next to the built-in ones.
//!
//! Position bookkeeping: all positions inside one step refer to the operand
//! of that step.  A step that removes several columns applies them as a
//! simultaneous deletion, which equals sequential single removals taken in
//! descending order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{CodeError, EnumOptions, LinearCode};
use crate::gf2::{BitMatrix, BitVec, LinAlgError};

/// Errors from code transformations and pipeline replay.
#[derive(Debug, thiserror::Error)]
pub enum DeriveError {
    /// A position does not index a coordinate of the operand.
    #[error("position {position} out of range for length {n}")]
    PositionOutOfRange { position: usize, n: usize },
    /// The same position was listed twice in one step.
    #[error("duplicate position {0} in step")]
    DuplicatePosition(usize),
    /// The operation needs at least one nonzero codeword.
    #[error("cannot {op} the zero code")]
    ZeroCode { op: &'static str },
    /// Zero-lengthening by zero columns is a no-op and almost surely a typo.
    #[error("lengthen-zero requires extra >= 1")]
    ZeroExtension,
    /// The step kind does not accept positions.
    #[error("step kind {kind:?} does not take positions")]
    UnexpectedPositions { kind: &'static str },
    /// A required field is missing from the step.
    #[error("step kind {kind:?} requires field {field:?}")]
    MissingField {
        kind: &'static str,
        field: &'static str,
    },
    /// The claimed subcode contains a row outside the outer code.
    #[error("subcode row {row} is not a codeword of the outer code")]
    NotASubcode { row: usize },
    /// The outer code and subcode live in different ambient spaces.
    #[error("outer code has length {outer} but subcode has length {subcode}")]
    SubcodeLengthMismatch { outer: usize, subcode: usize },
    /// The auxiliary code must have one generator row per missing dimension.
    #[error("auxiliary code has dimension {got} but the subcode is missing {required}")]
    AuxDimensionMismatch { required: usize, got: usize },
    /// No builder registered under the requested kind.
    #[error("unknown derivation kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Drop one coordinate: every codeword loses the bit at `position`.
///
/// Dimension is preserved unless the code contains a weight-one word
/// supported exactly there; minimum distance drops by at most one.
pub fn puncture(code: &LinearCode, position: usize) -> Result<LinearCode, DeriveError> {
    check_position(position, code.n())?;
    if code.k() == 0 {
        return Err(DeriveError::ZeroCode { op: "puncture" });
    }
    Ok(LinearCode::from_generator(
        &code.generator().delete_columns(&[position]),
    ))
}

/// Keep only codewords that are zero at `position`, then drop it.
///
/// When some codeword is nonzero there the dimension drops by exactly one;
/// otherwise this merely deletes an always-zero column.
pub fn shorten(code: &LinearCode, position: usize) -> Result<LinearCode, DeriveError> {
    check_position(position, code.n())?;
    let gen = code.generator();
    let with_bit: Vec<usize> = (0..code.k()).filter(|&r| gen.get(r, position)).collect();
    let cleared = match with_bit.split_first() {
        None => gen.clone(),
        Some((&pivot, rest)) => {
            let mut m = gen.clone();
            for &r in rest {
                m.xor_row_into(r, pivot);
            }
            let kept: Vec<BitVec> = (0..code.k()).filter(|&r| r != pivot).map(|r| m.row(r)).collect();
            if kept.is_empty() {
                BitMatrix::zeros(0, code.n())
            } else {
                BitMatrix::from_rows(&kept)
            }
        }
    };
    Ok(LinearCode::from_generator(
        &cleared.delete_columns(&[position]),
    ))
}

/// Append an overall parity bit to every codeword.
///
/// All weights of the result are even; odd weights round up by one and even
/// weights are unchanged, so the dimension is preserved.
pub fn extend_parity(code: &LinearCode) -> LinearCode {
    let gen = code.generator();
    let n = code.n();
    let ext = BitMatrix::from_fn(code.k(), n + 1, |r, c| {
        if c < n {
            gen.get(r, c)
        } else {
            gen.row(r).weight() % 2 == 1
        }
    });
    LinearCode::from_generator(&ext)
}

/// Append `extra` always-zero coordinates, preserving the weight of every
/// codeword.
pub fn lengthen_zero(code: &LinearCode, extra: usize) -> Result<LinearCode, DeriveError> {
    if extra == 0 {
        return Err(DeriveError::ZeroExtension);
    }
    Ok(LinearCode::from_generator(
        &code.generator().append_zero_columns(extra),
    ))
}

/// Patch the distance of a subcode chain with an auxiliary code.
///
/// Given codes `sub` ⊆ `outer` of the same length and an auxiliary code
/// `aux` whose dimension equals `dim outer − dim sub`, the result consists
/// of the words of `sub` padded with zeros together with coset
/// representatives of `outer`/`sub` paired, in generator-row order, with the
/// rows of `aux`.  The result has the dimension of `outer`, length
/// `outer.n() + aux.n()`, and minimum distance at least
/// `min(d(sub), d(outer) + d(aux))`.
pub fn construction_x(
    outer: &LinearCode,
    sub: &LinearCode,
    aux: &LinearCode,
) -> Result<LinearCode, DeriveError> {
    if sub.n() != outer.n() {
        return Err(DeriveError::SubcodeLengthMismatch {
            outer: outer.n(),
            subcode: sub.n(),
        });
    }
    for r in 0..sub.k() {
        if !outer.contains(&sub.generator().row(r))? {
            return Err(DeriveError::NotASubcode { row: r });
        }
    }
    let need = outer.k() - sub.k();
    if aux.k() != need {
        return Err(DeriveError::AuxDimensionMismatch {
            required: need,
            got: aux.k(),
        });
    }

    // Extend the subcode basis to a basis of the outer code, scanning the
    // outer generator rows in order and keeping each row that grows the span.
    let mut span = sub.generator().clone();
    let mut rank = span.rank();
    let mut extension: Vec<BitVec> = Vec::with_capacity(need);
    for r in 0..outer.k() {
        if extension.len() == need {
            break;
        }
        let row = outer.generator().row(r);
        let grown = span.stack(&BitMatrix::from_rows(std::slice::from_ref(&row)))?;
        if grown.rank() > rank {
            rank += 1;
            span = grown;
            extension.push(row);
        }
    }
    debug_assert_eq!(extension.len(), need, "outer rows must span the quotient");

    let n_out = outer.n() + aux.n();
    let aux_gen = aux.generator();
    let rows: Vec<BitVec> = (0..sub.k())
        .map(|r| {
            let mut v = BitVec::zeros(n_out);
            copy_bits(&mut v, 0, &sub.generator().row(r));
            v
        })
        .chain(extension.iter().enumerate().map(|(i, ext_row)| {
            let mut v = BitVec::zeros(n_out);
            copy_bits(&mut v, 0, ext_row);
            copy_bits(&mut v, outer.n(), &aux_gen.row(i));
            v
        }))
        .collect();
    let gen = if rows.is_empty() {
        BitMatrix::zeros(0, n_out)
    } else {
        BitMatrix::from_rows(&rows)
    };
    let result = LinearCode::from_generator(&gen);
    debug_assert_eq!(result.k(), outer.k(), "patched rows must stay independent");
    Ok(result)
}

/// Pick a coordinate met by some minimum-weight codeword: the smallest index
/// in the union of all minimum-weight supports.  Puncturing there is the
/// only way the minimum distance can actually drop.
pub fn find_puncture_position(
    code: &LinearCode,
    opts: &EnumOptions,
) -> Result<usize, DeriveError> {
    let enumeration = code.enumerate(opts)?;
    if enumeration.min_weight.is_none() {
        return Err(DeriveError::ZeroCode { op: "puncture" });
    }
    let support = &enumeration.min_weight_support;
    Ok((0..code.n())
        .find(|&i| support.get(i))
        .expect("a minimum-weight codeword has nonempty support"))
}

fn check_position(position: usize, n: usize) -> Result<(), DeriveError> {
    if position >= n {
        return Err(DeriveError::PositionOutOfRange { position, n });
    }
    Ok(())
}

fn copy_bits(dst: &mut BitVec, offset: usize, src: &BitVec) {
    for i in 0..src.len() {
        if src.get(i) {
            dst.set(offset + i, true);
        }
    }
}

/// One serialized pipeline step.
///
/// `kind` selects the transformation; the remaining fields parameterize it
/// and default to empty.  `subcode` and `aux` hold generator matrices in the
/// plain text format of [`BitMatrix::from_text`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationStep {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positions: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl DerivationStep {
    /// A bare step of the given kind with all parameters empty.
    pub fn of_kind(kind: &str) -> DerivationStep {
        DerivationStep {
            kind: kind.to_owned(),
            ..DerivationStep::default()
        }
    }

    /// A step of the given kind acting at fixed positions.
    pub fn at_positions(kind: &str, positions: &[usize]) -> DerivationStep {
        DerivationStep {
            positions: positions.to_vec(),
            ..DerivationStep::of_kind(kind)
        }
    }
}

/// A code transformation with its parameters bound, ready to apply.
pub trait Derivation: Send + Sync {
    /// The step kind this strategy was built from.
    fn kind(&self) -> &'static str;
    /// Transform `code`, returning the result and a short description of
    /// what was done (including any parameters chosen automatically).
    fn apply(&self, code: &LinearCode, opts: &EnumOptions) -> Result<Applied, DeriveError>;
}

/// Result of applying one [`Derivation`].
pub struct Applied {
    pub code: LinearCode,
    /// Human-readable rendering of the step, e.g. `puncture@17 (auto)`.
    pub detail: String,
}

/// Parameters of one pipeline stage, recorded after the step ran.
///
/// `d` is present when the stage's code was small enough to enumerate.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: String,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            Some(d) => write!(f, "{} -> [{},{},{}]", self.step, self.n, self.k, d),
            None => write!(f, "{} -> [{},{}]", self.step, self.n, self.k),
        }
    }
}

struct PunctureStep {
    positions: Vec<usize>,
}

impl Derivation for PunctureStep {
    fn kind(&self) -> &'static str {
        "puncture"
    }

    fn apply(&self, code: &LinearCode, opts: &EnumOptions) -> Result<Applied, DeriveError> {
        if self.positions.is_empty() {
            let position = find_puncture_position(code, opts)?;
            return Ok(Applied {
                code: puncture(code, position)?,
                detail: format!("puncture@{position} (auto)"),
            });
        }
        let positions = checked_descending(&self.positions, code.n())?;
        if code.k() == 0 {
            return Err(DeriveError::ZeroCode { op: "puncture" });
        }
        let punctured =
            LinearCode::from_generator(&code.generator().delete_columns(&positions));
        Ok(Applied {
            code: punctured,
            detail: format!("puncture@{}", render_positions(&self.positions)),
        })
    }
}

struct ShortenStep {
    positions: Vec<usize>,
}

impl Derivation for ShortenStep {
    fn kind(&self) -> &'static str {
        "shorten"
    }

    fn apply(&self, code: &LinearCode, _opts: &EnumOptions) -> Result<Applied, DeriveError> {
        if self.positions.is_empty() {
            return Ok(Applied {
                code: shorten(code, 0)?,
                detail: "shorten@0 (default)".to_owned(),
            });
        }
        let positions = checked_descending(&self.positions, code.n())?;
        let mut current = code.clone();
        for &p in &positions {
            current = shorten(&current, p)?;
        }
        Ok(Applied {
            code: current,
            detail: format!("shorten@{}", render_positions(&self.positions)),
        })
    }
}

struct ExtendParityStep;

impl Derivation for ExtendParityStep {
    fn kind(&self) -> &'static str {
        "extend-parity"
    }

    fn apply(&self, code: &LinearCode, _opts: &EnumOptions) -> Result<Applied, DeriveError> {
        Ok(Applied {
            code: extend_parity(code),
            detail: "extend-parity".to_owned(),
        })
    }
}

struct LengthenZeroStep {
    extra: usize,
}

impl Derivation for LengthenZeroStep {
    fn kind(&self) -> &'static str {
        "lengthen-zero"
    }

    fn apply(&self, code: &LinearCode, _opts: &EnumOptions) -> Result<Applied, DeriveError> {
        Ok(Applied {
            code: lengthen_zero(code, self.extra)?,
            detail: format!("lengthen-zero+{}", self.extra),
        })
    }
}

struct ConstructionXStep {
    sub: LinearCode,
    aux: LinearCode,
}

impl Derivation for ConstructionXStep {
    fn kind(&self) -> &'static str {
        "construction-x"
    }

    fn apply(&self, code: &LinearCode, _opts: &EnumOptions) -> Result<Applied, DeriveError> {
        let result = construction_x(code, &self.sub, &self.aux)?;
        Ok(Applied {
            code: result,
            detail: format!(
                "construction-x subcode [{},{}] aux [{},{}]",
                self.sub.n(),
                self.sub.k(),
                self.aux.n(),
                self.aux.k()
            ),
        })
    }
}

/// Validate positions against the operand length, reject duplicates, and
/// return them sorted descending so sequential removal matches simultaneous
/// deletion.
fn checked_descending(positions: &[usize], n: usize) -> Result<Vec<usize>, DeriveError> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(DeriveError::DuplicatePosition(pair[0]));
        }
    }
    for &p in &sorted {
        check_position(p, n)?;
    }
    Ok(sorted)
}

fn render_positions(positions: &[usize]) -> String {
    if positions.len() == 1 {
        positions[0].to_string()
    } else {
        format!("{positions:?}")
    }
}

fn require_no_positions(
    step: &DerivationStep,
    kind: &'static str,
) -> Result<(), DeriveError> {
    if step.positions.is_empty() {
        Ok(())
    } else {
        Err(DeriveError::UnexpectedPositions { kind })
    }
}

fn parse_code_field(
    step: &DerivationStep,
    kind: &'static str,
    field: &'static str,
    value: &Option<String>,
) -> Result<LinearCode, DeriveError> {
    let _ = step;
    let text = value
        .as_deref()
        .ok_or(DeriveError::MissingField { kind, field })?;
    Ok(LinearCode::from_generator(&BitMatrix::from_text(text)?))
}

/// Builds a bound [`Derivation`] from a serialized step.
pub type DerivationBuilder = fn(&DerivationStep) -> Result<Box<dyn Derivation>, DeriveError>;

/// Name-indexed registry of derivation builders.
///
/// [`DerivationRegistry::standard`] registers the built-in kinds; additional
/// kinds can be added with [`DerivationRegistry::register`] and override
/// built-ins of the same name.
pub struct DerivationRegistry {
    builders: BTreeMap<&'static str, DerivationBuilder>,
}

impl DerivationRegistry {
    /// An empty registry with no kinds.
    pub fn new() -> DerivationRegistry {
        DerivationRegistry {
            builders: BTreeMap::new(),
        }
    }

    /// The registry of built-in transformations.
    pub fn standard() -> DerivationRegistry {
        let mut registry = DerivationRegistry::new();
        registry.register("puncture", |step| {
            Ok(Box::new(PunctureStep {
                positions: step.positions.clone(),
            }))
        });
        registry.register("shorten", |step| {
            Ok(Box::new(ShortenStep {
                positions: step.positions.clone(),
            }))
        });
        registry.register("extend-parity", |step| {
            require_no_positions(step, "extend-parity")?;
            Ok(Box::new(ExtendParityStep))
        });
        registry.register("lengthen-zero", |step| {
            require_no_positions(step, "lengthen-zero")?;
            Ok(Box::new(LengthenZeroStep {
                extra: step.extra.unwrap_or(1),
            }))
        });
        registry.register("construction-x", |step| {
            require_no_positions(step, "construction-x")?;
            let sub = parse_code_field(step, "construction-x", "subcode", &step.subcode)?;
            let aux = parse_code_field(step, "construction-x", "aux", &step.aux)?;
            Ok(Box::new(ConstructionXStep { sub, aux }))
        });
        registry
    }

    /// Register (or replace) a builder under `kind`.
    pub fn register(&mut self, kind: &'static str, builder: DerivationBuilder) {
        self.builders.insert(kind, builder);
    }

    /// The registered kinds in sorted order.
    pub fn kinds(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    /// Bind a step's parameters into a ready-to-apply strategy.
    pub fn build(&self, step: &DerivationStep) -> Result<Box<dyn Derivation>, DeriveError> {
        match self.builders.get(step.kind.as_str()) {
            Some(builder) => builder(step),
            None => Err(DeriveError::UnknownKind(step.kind.clone())),
        }
    }

    /// Replay a pipeline, enumerating after each step to record parameters.
    ///
    /// Stages too large to enumerate get `d: None` in their trace entry; any
    /// other failure aborts the replay.
    pub fn apply_steps(
        &self,
        code: &LinearCode,
        steps: &[DerivationStep],
        opts: &EnumOptions,
    ) -> Result<(LinearCode, Vec<TraceEntry>), DeriveError> {
        let mut current = code.clone();
        let mut trace = Vec::with_capacity(steps.len());
        for step in steps {
            let applied = self.build(step)?.apply(&current, opts)?;
            current = applied.code;
            let d = match current.enumerate(opts) {
                Ok(enumeration) => enumeration.min_weight,
                Err(CodeError::EnumerationRefused { .. }) => None,
                Err(other) => return Err(other.into()),
            };
            trace.push(TraceEntry {
                step: applied.detail,
                n: current.n(),
                k: current.k(),
                d,
            });
        }
        Ok((current, trace))
    }
}

impl Default for DerivationRegistry {
    fn default() -> DerivationRegistry {
        DerivationRegistry::standard()
    }
}
