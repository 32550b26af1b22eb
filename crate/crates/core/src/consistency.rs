//! Bounded check for the locally consistent class: every tile initially binds
//! with total strength exactly 2, and no producible assembly has a
//! positive-strength glue facing a different glue.

use std::fmt;

use crate::atam::{
    attach, binding_strength, explore, matching_strength, Assembly, AssemblySequence, Direction, Pos, Tas,
};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Every placement binds with strength exactly 2.
    StrengthExactlyTwo,
    /// No positive-strength glue mismatches between abutting tiles.
    NoMismatch,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::StrengthExactlyTwo => f.write_str("strength-exactly-two"),
            Condition::NoMismatch => f.write_str("no-mismatch"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcWitness {
    pub condition: Condition,
    /// For [`Condition::StrengthExactlyTwo`], a sequence whose last step is the
    /// offending placement; for [`Condition::NoMismatch`], a sequence
    /// producing `assembly` when one is known.
    pub sequence: Option<AssemblySequence>,
    pub assembly: Assembly,
    pub position: Pos,
    pub direction: Option<Direction>,
    pub explanation: String,
}

impl LcWitness {
    /// Re-runs the check this witness belongs to on the witness data alone.
    pub fn replay(&self, tas: &Tas) -> Verdict<LcWitness> {
        match self.condition {
            Condition::StrengthExactlyTwo => match &self.sequence {
                Some(seq) => check_strength_exactly_two(tas, seq),
                None => Verdict::Pass,
            },
            Condition::NoMismatch => check_no_mismatch(tas, &self.assembly),
        }
    }
}

impl fmt::Display for LcWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {}: {}", self.condition, self.position, self.explanation)
    }
}

pub fn check_strength_exactly_two(tas: &Tas, seq: &AssemblySequence) -> Verdict<LcWitness> {
    let mut assembly = tas.seed_assembly();
    for (i, &(pos, tile)) in seq.steps().iter().enumerate() {
        let fail = |strength: Option<u8>, assembly: &Assembly| {
            let explanation = match strength {
                Some(s) => format!("tile {} binds with total strength {s}", tile_name(tas, tile)),
                None => format!("tile {} cannot be placed here", tile_name(tas, tile)),
            };
            Verdict::Fail(LcWitness {
                condition: Condition::StrengthExactlyTwo,
                sequence: Some(AssemblySequence::new(seq.steps()[..=i].to_vec())),
                assembly: assembly.clone(),
                position: pos,
                direction: None,
                explanation,
            })
        };
        let strength = match binding_strength(tas, &assembly, pos, tile) {
            Ok(s) => s,
            Err(_) => return fail(None, &assembly),
        };
        if strength != 2 {
            return fail(Some(strength), &assembly);
        }
        match attach(tas, &assembly, pos, tile) {
            Ok(next) => assembly = next,
            Err(_) => return fail(None, &assembly),
        }
    }
    Verdict::Pass
}

pub fn check_no_mismatch(tas: &Tas, assembly: &Assembly) -> Verdict<LcWitness> {
    for (pos, tile) in assembly.cells() {
        let t = &tas.tiles()[tile];
        for d in Direction::ALL {
            let side = t.side(d);
            if side.strength() == 0 {
                continue;
            }
            let Some(n) = assembly.get(pos.step(d)) else { continue };
            let facing = tas.tiles()[n].side(d.opposite());
            if facing != side {
                return Verdict::Fail(LcWitness {
                    condition: Condition::NoMismatch,
                    sequence: None,
                    assembly: assembly.clone(),
                    position: pos,
                    direction: Some(d),
                    explanation: format!(
                        "{} presents {side} on {d} but {} at {} presents {facing}",
                        t.name(),
                        tas.tiles()[n].name(),
                        pos.step(d)
                    ),
                });
            }
        }
    }
    Verdict::Pass
}

fn tile_name(tas: &Tas, tile: usize) -> &str {
    tas.tiles().get(tile).map_or("?", |t| t.name())
}

/// Result of [`verify_locally_consistent`]. A pass with `truncated` set only
/// means the system is consistent up to `bound` tiles.
#[derive(Debug, Clone)]
pub struct LcReport {
    pub verdict: Verdict<LcWitness>,
    pub truncated: bool,
    pub bound: usize,
    pub assemblies_checked: usize,
    pub placements_checked: usize,
}

impl LcReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn coverage_note(&self) -> String {
        if self.truncated {
            format!("verified up to {} tiles (producible set truncated)", self.bound)
        } else {
            format!("producible set exhausted within {} tiles", self.bound)
        }
    }
}

pub fn verify_locally_consistent(tas: &Tas, bound: usize) -> LcReport {
    let ex = explore(tas, bound);
    let report = |verdict| LcReport {
        verdict,
        truncated: ex.is_truncated(),
        bound: ex.bound(),
        assemblies_checked: ex.len(),
        placements_checked: ex.edges().len(),
    };
    let sequence_to = |i: usize| AssemblySequence::new(ex.path_to(i).iter().map(|e| e.label).collect());

    for (i, a) in ex.states().iter().enumerate() {
        if let Verdict::Fail(mut w) = check_no_mismatch(tas, a) {
            w.sequence = Some(sequence_to(i));
            return report(Verdict::Fail(w));
        }
    }
    for e in ex.edges() {
        let before = ex.state(e.from);
        let (pos, tile) = e.label;
        let t = &tas.tiles()[tile];
        let strength: u8 = Direction::ALL.iter().map(|&d| matching_strength(tas, before, pos, t, d)).sum();
        if strength != 2 {
            let mut seq = sequence_to(e.from);
            seq.push(pos, tile);
            return report(Verdict::Fail(LcWitness {
                condition: Condition::StrengthExactlyTwo,
                sequence: Some(seq),
                assembly: before.clone(),
                position: pos,
                direction: None,
                explanation: format!("tile {} binds with total strength {strength}", t.name()),
            }));
        }
    }
    report(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atam::{sample_sequence, TileType};
    use crate::corpus;

    #[test]
    fn elbow_sequences_bind_with_exactly_two() {
        let tas = corpus::elbow();
        for seed in 0..8 {
            let seq = sample_sequence(&tas, seed, 10);
            assert!(check_strength_exactly_two(&tas, &seq).passed());
        }
    }

    #[test]
    fn overbind_fails_condition_one_at_corner() {
        let tas = corpus::overbind_variant();
        let r = |n: &str| tas.tile_index(n).unwrap();
        let seq = AssemblySequence::new(vec![
            (Pos::new(1, 0), r("tR")),
            (Pos::new(0, 1), r("tU")),
            (Pos::new(1, 1), r("tX")),
        ]);
        let v = check_strength_exactly_two(&tas, &seq);
        let w = v.witness().unwrap();
        assert_eq!(w.position, Pos::new(1, 1));
        assert!(w.explanation.contains("strength 4"));
        assert_eq!(w.replay(&tas), v);
    }

    #[test]
    fn empty_sequence_is_vacuous() {
        let tas = Tas::new(vec![TileType::with_sides("s", &[])], 0).unwrap();
        assert!(check_strength_exactly_two(&tas, &AssemblySequence::default()).passed());
        assert!(check_no_mismatch(&tas, &tas.seed_assembly()).passed());
    }

    #[test]
    fn mismatch_is_detected_on_terminal_assembly() {
        let tas = corpus::mismatch_variant();
        let r = |n: &str| tas.tile_index(n).unwrap();
        let a: Assembly =
            [(Pos::ORIGIN, r("seed")), (Pos::new(1, 0), r("tR")), (Pos::new(0, 1), r("tU")), (Pos::new(1, 1), r("tD"))]
                .into_iter()
                .collect();
        let v = check_no_mismatch(&tas, &a);
        let w = v.witness().unwrap();
        // tU at (0,1) presents c:1 east against tD's x:1
        assert_eq!(w.position, Pos::new(0, 1));
        assert_eq!(w.direction, Some(Direction::E));
        assert!(check_no_mismatch(
            &corpus::elbow(),
            &sample_sequence(&corpus::elbow(), 0, 9).replay(&corpus::elbow()).unwrap()
        )
        .passed());
    }

    #[test]
    fn verifier_verdicts_on_corpus() {
        let r = verify_locally_consistent(&corpus::elbow(), 10);
        assert!(r.passed() && !r.truncated);
        let r = verify_locally_consistent(&corpus::counter(4), 25);
        assert!(r.passed() && r.truncated);
        for bad in [corpus::mismatch_variant(), corpus::overbind_variant()] {
            let r = verify_locally_consistent(&bad, 10);
            let w = r.verdict.witness().expect("fault detected");
            assert!(!w.replay(&bad).passed(), "witness replays");
        }
    }

    #[test]
    fn failures_are_monotone_in_bound() {
        for bad in [corpus::mismatch_variant(), corpus::overbind_variant()] {
            let first = (1..10).find(|&b| !verify_locally_consistent(&bad, b).passed()).unwrap();
            for b in first..12 {
                assert!(!verify_locally_consistent(&bad, b).passed());
            }
        }
    }
}
