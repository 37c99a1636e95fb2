use std::fmt;

/// One well-formedness problem found by a validator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    OutOfAlphabetWrite,
    EndmarkerOverwrite,
    MoveOffEndmarker,
    DeterminismMismatch,
    UnknownState,
    TapeAlphabet,
    PushOutsideTapeAlphabet,
    BottomMarker,
    NonShorteningRewrite,
    EndmarkerNotReproduced,
    WindowShape,
    EditOnEndmarker,
    GrammarShape,
    SymbolClash,
    Other,
}

/// A list of violations; empty means the object is well formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(&mut self, kind: ViolationKind, detail: impl Into<String>) {
        self.violations.push(Violation { kind, detail: detail.into() });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {:?}: {}", v.kind, v.detail)?;
        }
        Ok(())
    }
}
