/// Outcome of a check: either it passed, or it failed with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}
