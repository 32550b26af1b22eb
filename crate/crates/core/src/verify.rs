//! Checks that a compiled system simulates its source system within a bound:
//! the seed block represents the seed, the represented assemblies are exactly
//! the producible ones, and block-level growth mirrors tile-level growth.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use crate::atam::{explore, is_producible, is_reachable, Assembly, Placement, Pos};
use crate::encode::CompiledSystem;
use crate::explore::Exploration;
use crate::macrosim::{decode_block, r_star, MacroAssembly, MacroEvent, MacroSim};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimCondition {
    Seed,
    Coverage,
    Dynamics,
}

impl fmt::Display for SimCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimCondition::Seed => "seed",
            SimCondition::Coverage => "coverage",
            SimCondition::Dynamics => "dynamics",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessKind {
    /// The seed block does not decode to the seed tile.
    SeedMismatch,
    /// A block fails to decode.
    Integrity,
    /// A macro event could not be applied during exploration.
    MacroFault,
    /// A represented assembly that the source cannot produce.
    Junk,
    /// A producible assembly that no macro assembly represents.
    Uncovered,
    /// A macro transition whose images are not related by source growth.
    UnsoundStep,
    /// A source transition the macro system never mirrors.
    Unmirrored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimWitness {
    pub condition: SimCondition,
    pub kind: WitnessKind,
    pub explanation: String,
    /// Macro events from the initial macro assembly to the offending state;
    /// for [`WitnessKind::UnsoundStep`] the last event is the offending step.
    pub events: Vec<MacroEvent>,
    pub before: Option<Assembly>,
    pub after: Option<Assembly>,
}

impl SimWitness {
    /// Whether the failure reproduces from the witness data, re-running only
    /// what the witness cannot carry (a bounded exploration for absence
    /// claims).
    pub fn replay(&self, sim: &MacroSim, bound: usize) -> bool {
        let cs = sim.compiled();
        match self.kind {
            WitnessKind::SeedMismatch | WitnessKind::Integrity if self.events.is_empty() => {
                !check_seed_condition(cs).passed()
            }
            WitnessKind::SeedMismatch | WitnessKind::Integrity => {
                sim.replay(&self.events).is_ok_and(|m| r_star(&m, cs).is_err())
            }
            WitnessKind::MacroFault => {
                let (last, prefix) = match self.events.split_last() {
                    Some(x) => x,
                    None => return false,
                };
                sim.replay(prefix).is_ok_and(|m| sim.step(&m, last, &crate::macrosim::BitSource::Seeded(0)).is_err())
            }
            WitnessKind::Junk => match sim.replay(&self.events).and_then(|m| r_star(&m, cs)) {
                Ok(image) => !is_producible(&cs.source, &image) || image.len() > bound + 1,
                Err(_) => true,
            },
            WitnessKind::Uncovered | WitnessKind::Unmirrored => {
                !Analysis::build(sim, bound).is_ok_and(|a| match self.kind {
                    WitnessKind::Uncovered => self.after.as_ref().is_some_and(|t| a.image_set.contains(t)),
                    _ => match (&self.before, &self.after) {
                        (Some(x), Some(y)) => a.mirrors(x, y),
                        _ => false,
                    },
                })
            }
            WitnessKind::UnsoundStep => {
                let Some((_, prefix)) = self.events.split_last() else { return false };
                let before = sim.replay(prefix).and_then(|m| r_star(&m, cs));
                let after = sim.replay(&self.events).and_then(|m| r_star(&m, cs));
                match (before, after) {
                    (Ok(b), Ok(a)) => b != a && !is_reachable(&cs.source, &b, &a),
                    _ => false,
                }
            }
        }
    }
}

impl fmt::Display for SimWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.explanation)?;
        if !self.events.is_empty() {
            write!(f, " (after {} macro events)", self.events.len())?;
        }
        Ok(())
    }
}

fn show(a: &Assembly, cs: &CompiledSystem) -> String {
    let cells: Vec<String> = a.cells().map(|(p, t)| format!("{p}={}", cs.source.tiles()[t].name())).collect();
    format!("{{{}}}", cells.join(" "))
}

pub fn check_seed_condition(cs: &CompiledSystem) -> Verdict<SimWitness> {
    let fail = |kind, explanation| {
        Verdict::Fail(SimWitness {
            condition: SimCondition::Seed,
            kind,
            explanation,
            events: Vec::new(),
            before: None,
            after: None,
        })
    };
    match decode_block(Pos::ORIGIN, &cs.seed_block, cs) {
        Ok(Some(t)) if t == cs.source.seed() => Verdict::Pass,
        Ok(Some(t)) => fail(
            WitnessKind::SeedMismatch,
            format!(
                "seed block represents {} instead of {}",
                cs.source.tiles()[t].name(),
                cs.source.tiles()[cs.source.seed()].name()
            ),
        ),
        Ok(None) => fail(WitnessKind::SeedMismatch, "seed block represents no tile".into()),
        Err(e) => fail(WitnessKind::Integrity, e.to_string()),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageStats {
    pub macro_states: usize,
    pub images: usize,
    pub source_assemblies: usize,
    /// Represented assemblies equal the producible assemblies within the bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DynamicsStats {
    pub source_transitions: usize,
    pub image_transitions: usize,
    /// Image transitions adding exactly one tile.
    pub one_step_transitions: usize,
    /// Source transitions mirrored only through intermediate macro states.
    pub indirect_mirrors: usize,
}

/// Explorations and images shared by the coverage and dynamics checks.
struct Analysis {
    macro_ex: Exploration<MacroAssembly, MacroEvent>,
    images: Vec<Assembly>,
    image_set: HashSet<Assembly>,
    image_pairs: HashSet<(Assembly, Assembly)>,
    source: Exploration<Assembly, Placement>,
    source_plus: Exploration<Assembly, Placement>,
}

impl Analysis {
    fn build(sim: &MacroSim, bound: usize) -> Result<Analysis, Box<SimWitness>> {
        let cs = sim.compiled();
        let macro_ex = sim.explore(bound).map_err(|e| {
            Box::new(SimWitness {
                condition: SimCondition::Coverage,
                kind: WitnessKind::MacroFault,
                explanation: e.to_string(),
                events: Vec::new(),
                before: None,
                after: None,
            })
        })?;
        let mut images = Vec::with_capacity(macro_ex.len());
        for (i, m) in macro_ex.states().iter().enumerate() {
            match r_star(m, cs) {
                Ok(a) => images.push(a),
                Err(e) => {
                    return Err(Box::new(SimWitness {
                        condition: SimCondition::Coverage,
                        kind: WitnessKind::Integrity,
                        explanation: e.to_string(),
                        events: path_events(&macro_ex, i),
                        before: None,
                        after: None,
                    }))
                }
            }
        }
        let image_set = images.iter().cloned().collect();
        let image_pairs = macro_ex
            .edges()
            .iter()
            .filter(|e| images[e.from] != images[e.to])
            .map(|e| (images[e.from].clone(), images[e.to].clone()))
            .collect();
        Ok(Analysis {
            macro_ex,
            images,
            image_set,
            image_pairs,
            source: explore(&cs.source, bound),
            source_plus: explore(&cs.source, bound + 1),
        })
    }

    /// Some macro state representing `from` reaches one representing `to`.
    fn mirrors(&self, from: &Assembly, to: &Assembly) -> bool {
        self.image_pairs.contains(&(from.clone(), to.clone())) || self.mirrors_indirectly(from, to)
    }

    fn mirrors_indirectly(&self, from: &Assembly, to: &Assembly) -> bool {
        let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in self.macro_ex.edges() {
            succ.entry(e.from).or_default().push(e.to);
        }
        let mut seen = vec![false; self.macro_ex.len()];
        let mut queue: VecDeque<usize> = (0..self.images.len()).filter(|&i| &self.images[i] == from).collect();
        for &i in &queue {
            seen[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            if &self.images[i] == to {
                return true;
            }
            for &j in succ.get(&i).into_iter().flatten() {
                // once the image leaves the interval [from, to] it cannot come back
                if !seen[j] && self.images[j].is_subset_of(to) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        false
    }

    fn coverage(&self, cs: &CompiledSystem, bound: usize) -> (Verdict<SimWitness>, CoverageStats) {
        let source_set: HashSet<&Assembly> = self.source.states().iter().collect();
        let plus_set: HashSet<&Assembly> = self.source_plus.states().iter().collect();
        let stats = CoverageStats {
            macro_states: self.macro_ex.len(),
            images: self.image_set.len(),
            source_assemblies: source_set.len(),
            exact: self.image_set.len() == source_set.len() && source_set.iter().all(|a| self.image_set.contains(*a)),
        };
        for (i, image) in self.images.iter().enumerate() {
            if !plus_set.contains(image) {
                let verdict = Verdict::Fail(SimWitness {
                    condition: SimCondition::Coverage,
                    kind: WitnessKind::Junk,
                    explanation: format!(
                        "represented assembly {} is not producible within {} tiles",
                        show(image, cs),
                        bound + 1
                    ),
                    events: path_events(&self.macro_ex, i),
                    before: None,
                    after: Some(image.clone()),
                });
                return (verdict, stats);
            }
        }
        for a in self.source.states() {
            if !self.image_set.contains(a) {
                let verdict = Verdict::Fail(SimWitness {
                    condition: SimCondition::Coverage,
                    kind: WitnessKind::Uncovered,
                    explanation: format!("producible assembly {} is represented by no macro assembly", show(a, cs)),
                    events: Vec::new(),
                    before: None,
                    after: Some(a.clone()),
                });
                return (verdict, stats);
            }
        }
        (Verdict::Pass, stats)
    }

    fn dynamics(&self, cs: &CompiledSystem) -> (Verdict<SimWitness>, DynamicsStats) {
        let mut stats = DynamicsStats {
            source_transitions: self.source.edges().len(),
            image_transitions: self.image_pairs.len(),
            one_step_transitions: self.image_pairs.iter().filter(|(a, b)| b.len() == a.len() + 1).count(),
            indirect_mirrors: 0,
        };
        for e in self.macro_ex.edges() {
            let (before, after) = (&self.images[e.from], &self.images[e.to]);
            if before != after && !is_reachable(&cs.source, before, after) {
                let mut events = path_events(&self.macro_ex, e.from);
                events.push(e.label.clone());
                let verdict = Verdict::Fail(SimWitness {
                    condition: SimCondition::Dynamics,
                    kind: WitnessKind::UnsoundStep,
                    explanation: format!(
                        "macro step {} turns {} into {}, which the source cannot grow",
                        e.label,
                        show(before, cs),
                        show(after, cs)
                    ),
                    events,
                    before: Some(before.clone()),
                    after: Some(after.clone()),
                });
                return (verdict, stats);
            }
        }
        for e in self.source.edges() {
            let (before, after) = (self.source.state(e.from), self.source.state(e.to));
            if self.image_pairs.contains(&(before.clone(), after.clone())) {
                continue;
            }
            if self.mirrors_indirectly(before, after) {
                stats.indirect_mirrors += 1;
                continue;
            }
            let verdict = Verdict::Fail(SimWitness {
                condition: SimCondition::Dynamics,
                kind: WitnessKind::Unmirrored,
                explanation: format!(
                    "source step {} -> {} has no macro counterpart",
                    show(before, cs),
                    show(after, cs)
                ),
                events: Vec::new(),
                before: Some(before.clone()),
                after: Some(after.clone()),
            });
            return (verdict, stats);
        }
        (Verdict::Pass, stats)
    }
}

fn path_events(ex: &Exploration<MacroAssembly, MacroEvent>, i: usize) -> Vec<MacroEvent> {
    ex.path_to(i).into_iter().map(|e| e.label.clone()).collect()
}

pub fn check_coverage(cs: &CompiledSystem, bound: usize) -> Verdict<SimWitness> {
    check_coverage_with(&MacroSim::new(cs), bound)
}

pub fn check_coverage_with(sim: &MacroSim, bound: usize) -> Verdict<SimWitness> {
    match Analysis::build(sim, bound) {
        Ok(a) => a.coverage(sim.compiled(), bound).0,
        Err(w) => Verdict::Fail(*w),
    }
}

pub fn check_dynamics(cs: &CompiledSystem, bound: usize) -> Verdict<SimWitness> {
    check_dynamics_with(&MacroSim::new(cs), bound)
}

pub fn check_dynamics_with(sim: &MacroSim, bound: usize) -> Verdict<SimWitness> {
    match Analysis::build(sim, bound) {
        Ok(a) => a.dynamics(sim.compiled()).0,
        Err(mut w) => {
            w.condition = SimCondition::Dynamics;
            Verdict::Fail(*w)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub bound: usize,
    pub condition1: Verdict<SimWitness>,
    pub condition2: Verdict<SimWitness>,
    pub condition3: Verdict<SimWitness>,
    pub coverage: CoverageStats,
    pub dynamics: DynamicsStats,
    pub source_truncated: bool,
    pub macro_truncated: bool,
}

impl SimulationReport {
    pub fn passed(&self) -> bool {
        self.condition1.passed() && self.condition2.passed() && self.condition3.passed()
    }

    /// `key value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = |v: &Verdict<SimWitness>| match v {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail(w) => format!("fail {w}"),
        };
        writeln!(out, "bound {}", self.bound).unwrap();
        writeln!(out, "source-truncated {}", self.source_truncated).unwrap();
        writeln!(out, "macro-truncated {}", self.macro_truncated).unwrap();
        writeln!(out, "condition1 {}", verdict(&self.condition1)).unwrap();
        writeln!(out, "condition2 {}", verdict(&self.condition2)).unwrap();
        writeln!(out, "coverage-macro-states {}", self.coverage.macro_states).unwrap();
        writeln!(out, "coverage-images {}", self.coverage.images).unwrap();
        writeln!(out, "coverage-source-assemblies {}", self.coverage.source_assemblies).unwrap();
        writeln!(out, "coverage-exact {}", self.coverage.exact).unwrap();
        writeln!(out, "condition3 {}", verdict(&self.condition3)).unwrap();
        writeln!(out, "dynamics-source-transitions {}", self.dynamics.source_transitions).unwrap();
        writeln!(out, "dynamics-image-transitions {}", self.dynamics.image_transitions).unwrap();
        writeln!(out, "dynamics-one-step {}", self.dynamics.one_step_transitions).unwrap();
        writeln!(out, "dynamics-indirect {}", self.dynamics.indirect_mirrors).unwrap();
        writeln!(out, "result {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }
}

pub fn full_report(cs: &CompiledSystem, bound: usize) -> SimulationReport {
    full_report_with(&MacroSim::new(cs), bound)
}

pub fn full_report_with(sim: &MacroSim, bound: usize) -> SimulationReport {
    let cs = sim.compiled();
    let condition1 = check_seed_condition(cs);
    match Analysis::build(sim, bound) {
        Ok(a) => {
            let (condition2, coverage) = a.coverage(cs, bound);
            let (condition3, dynamics) = a.dynamics(cs);
            SimulationReport {
                bound,
                condition1,
                condition2,
                condition3,
                coverage,
                dynamics,
                source_truncated: a.source.is_truncated(),
                macro_truncated: a.macro_ex.is_truncated(),
            }
        }
        Err(w) => {
            let mut w3 = (*w).clone();
            w3.condition = SimCondition::Dynamics;
            SimulationReport {
                bound,
                condition1,
                condition2: Verdict::Fail(*w),
                condition3: Verdict::Fail(w3),
                coverage: CoverageStats::default(),
                dynamics: DynamicsStats::default(),
                source_truncated: explore(&cs.source, bound).is_truncated(),
                macro_truncated: false,
            }
        }
    }
}
