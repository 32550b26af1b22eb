//! Temperature-2 abstract Tile Assembly Model.
//!
//! Tiles are unit squares with one glue per side. A tile may attach at an
//! empty grid position when the summed strength of its sides whose glue
//! (label and strength) matches the facing side of an occupied neighbor is at
//! least [`TEMPERATURE`]. Mismatching sides do not block attachment.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::explore::Exploration;

/// The only temperature this workbench models.
pub const TEMPERATURE: u8 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtamError {
    #[error("position {0} is already occupied")]
    Occupied(Pos),
    #[error("tile {tile} cannot attach at {pos}: binding strength {strength} < {TEMPERATURE}")]
    IllegalAttachment { pos: Pos, tile: usize, strength: u8 },
    #[error("unknown tile index {0}")]
    UnknownTile(usize),
    #[error("no attachment record for {0}")]
    NoAttachmentRecord(Pos),
    #[error("invalid side pad: {0}")]
    InvalidSidePad(String),
    #[error("invalid tile assembly system: {0}")]
    InvalidTas(String),
}

/// A side of a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    N,
    E,
    S,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::N => Direction::S,
            Direction::E => Direction::W,
            Direction::S => Direction::N,
            Direction::W => Direction::E,
        }
    }

    /// Unit vector pointing out of this side.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Direction::N => (0, 1),
            Direction::E => (1, 0),
            Direction::S => (0, -1),
            Direction::W => (-1, 0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Direction::N => 'N',
            Direction::E => 'E',
            Direction::S => 'S',
            Direction::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Direction> {
        match c {
            'N' => Some(Direction::N),
            'E' => Some(Direction::E),
            'S' => Some(Direction::S),
            'W' => Some(Direction::W),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A glue label. `Null` is the distinguished "no bond" glue.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Glue {
    Null,
    Label(String),
}

impl Glue {
    pub fn label(name: impl Into<String>) -> Glue {
        Glue::Label(name.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Glue::Null)
    }
}

impl fmt::Display for Glue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Glue::Null => f.write_str("-"),
            Glue::Label(l) => f.write_str(l),
        }
    }
}

/// Glue and strength on one side of a tile type.
///
/// Strength is 0 exactly when the glue is null.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SidePad {
    glue: Glue,
    strength: u8,
}

impl SidePad {
    pub const NULL: SidePad = SidePad { glue: Glue::Null, strength: 0 };

    pub fn new(glue: Glue, strength: u8) -> Result<SidePad, AtamError> {
        if strength > 2 {
            return Err(AtamError::InvalidSidePad(format!("strength {strength} out of range 0..=2")));
        }
        if glue.is_null() != (strength == 0) {
            return Err(AtamError::InvalidSidePad(format!(
                "glue {glue} with strength {strength}: strength must be 0 iff the glue is null"
            )));
        }
        if let Glue::Label(l) = &glue {
            if l.is_empty() {
                return Err(AtamError::InvalidSidePad("empty glue label".into()));
            }
        }
        Ok(SidePad { glue, strength })
    }

    /// Shorthand for a labeled side; panics on an invalid pair.
    pub fn labeled(label: &str, strength: u8) -> SidePad {
        SidePad::new(Glue::label(label), strength).expect("valid labeled side pad")
    }

    pub fn glue(&self) -> &Glue {
        &self.glue
    }

    pub fn strength(&self) -> u8 {
        self.strength
    }
}

impl fmt::Display for SidePad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.glue {
            Glue::Null => f.write_str("-"),
            Glue::Label(l) => write!(f, "{l}:{}", self.strength),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TileType {
    name: String,
    sides: [SidePad; 4],
}

impl TileType {
    /// Sides are given in N, E, S, W order.
    pub fn new(name: impl Into<String>, sides: [SidePad; 4]) -> TileType {
        TileType { name: name.into(), sides }
    }

    /// Builder for the common case: every side null except those listed.
    pub fn with_sides(name: impl Into<String>, sides: &[(Direction, SidePad)]) -> TileType {
        let mut all = [SidePad::NULL, SidePad::NULL, SidePad::NULL, SidePad::NULL];
        for (d, p) in sides {
            all[d.index()] = p.clone();
        }
        TileType::new(name, all)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn side(&self, d: Direction) -> &SidePad {
        &self.sides[d.index()]
    }

    pub fn sides(&self) -> &[SidePad; 4] {
        &self.sides
    }
}

/// A singly-seeded temperature-2 tile assembly system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tas {
    tiles: Vec<TileType>,
    seed: usize,
}

impl Tas {
    pub fn new(tiles: Vec<TileType>, seed: usize) -> Result<Tas, AtamError> {
        if tiles.is_empty() {
            return Err(AtamError::InvalidTas("empty tile set".into()));
        }
        if seed >= tiles.len() {
            return Err(AtamError::InvalidTas(format!("seed index {seed} out of range for {} tiles", tiles.len())));
        }
        let mut names = HashSet::new();
        for t in &tiles {
            if t.name.is_empty() {
                return Err(AtamError::InvalidTas("empty tile name".into()));
            }
            if !names.insert(t.name.as_str()) {
                return Err(AtamError::InvalidTas(format!("duplicate tile name {}", t.name)));
            }
        }
        Ok(Tas { tiles, seed })
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile(&self, index: usize) -> Result<&TileType, AtamError> {
        self.tiles.get(index).ok_or(AtamError::UnknownTile(index))
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn temperature(&self) -> u8 {
        TEMPERATURE
    }

    pub fn tile_index(&self, name: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t.name == name)
    }

    /// The assembly consisting of the seed tile at the origin.
    pub fn seed_assembly(&self) -> Assembly {
        Assembly::singleton(Pos::ORIGIN, self.seed)
    }
}

/// A grid position. Ordered by `y` first, then `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pos {
    pub x: i64,
    pub y: i64,
}

impl Pos {
    pub const ORIGIN: Pos = Pos { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Pos {
        Pos { x, y }
    }

    pub fn step(self, d: Direction) -> Pos {
        let (dx, dy) = d.offset();
        Pos { x: self.x + dx, y: self.y + dy }
    }
}

impl Ord for Pos {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Pos {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Partial map from grid positions to tile-type indices.
///
/// Backed by an ordered map, so equal assemblies hash and compare equal
/// regardless of construction order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assembly {
    cells: BTreeMap<Pos, usize>,
}

impl Assembly {
    pub fn new() -> Assembly {
        Assembly::default()
    }

    pub fn singleton(pos: Pos, tile: usize) -> Assembly {
        let mut cells = BTreeMap::new();
        cells.insert(pos, tile);
        Assembly { cells }
    }

    pub fn get(&self, pos: Pos) -> Option<usize> {
        self.cells.get(&pos).copied()
    }

    pub fn contains(&self, pos: Pos) -> bool {
        self.cells.contains_key(&pos)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = (Pos, usize)> + '_ {
        self.cells.iter().map(|(p, t)| (*p, *t))
    }

    /// Inserts without checking the attachment rule.
    pub fn insert(&mut self, pos: Pos, tile: usize) -> Option<usize> {
        self.cells.insert(pos, tile)
    }

    pub fn remove(&mut self, pos: Pos) -> Option<usize> {
        self.cells.remove(&pos)
    }

    pub fn is_subset_of(&self, other: &Assembly) -> bool {
        self.cells.iter().all(|(p, t)| other.get(*p) == Some(*t))
    }

    /// Positions of `self` that are absent from `base`, assuming `base` is a subset.
    pub fn difference(&self, base: &Assembly) -> Vec<(Pos, usize)> {
        self.cells().filter(|(p, _)| !base.contains(*p)).collect()
    }

    /// Inclusive bounding box as `(min, max)`.
    pub fn bounds(&self) -> Option<(Pos, Pos)> {
        let mut it = self.cells.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }
}

impl FromIterator<(Pos, usize)> for Assembly {
    fn from_iter<I: IntoIterator<Item = (Pos, usize)>>(iter: I) -> Self {
        Assembly { cells: iter.into_iter().collect() }
    }
}

/// Strength contributed by side `d` of tile `tile` placed at `pos`: the side's
/// strength when the neighbor across `d` exists and presents the same glue at
/// the same strength, else 0.
pub fn matching_strength(tas: &Tas, assembly: &Assembly, pos: Pos, tile: &TileType, d: Direction) -> u8 {
    let side = tile.side(d);
    if side.strength == 0 {
        return 0;
    }
    match assembly.get(pos.step(d)) {
        Some(n) => {
            let facing = tas.tiles[n].side(d.opposite());
            if facing == side {
                side.strength
            } else {
                0
            }
        }
        None => 0,
    }
}

pub fn binding_strength(tas: &Tas, assembly: &Assembly, pos: Pos, tile: usize) -> Result<u8, AtamError> {
    if assembly.contains(pos) {
        return Err(AtamError::Occupied(pos));
    }
    let t = tas.tile(tile)?;
    Ok(Direction::ALL.iter().map(|&d| matching_strength(tas, assembly, pos, t, d)).sum())
}

/// Empty positions with at least one occupied neighbor, in (y, x) order.
pub fn perimeter(assembly: &Assembly) -> BTreeSet<Pos> {
    let mut out = BTreeSet::new();
    for (p, _) in assembly.cells() {
        for d in Direction::ALL {
            let q = p.step(d);
            if !assembly.contains(q) {
                out.insert(q);
            }
        }
    }
    out
}

/// Every legal single-tile attachment, ordered by (y, x, tile index).
pub fn frontier(tas: &Tas, assembly: &Assembly) -> Vec<(Pos, usize)> {
    let mut out = Vec::new();
    for pos in perimeter(assembly) {
        for tile in 0..tas.tiles.len() {
            let s: u8 =
                Direction::ALL.iter().map(|&d| matching_strength(tas, assembly, pos, &tas.tiles[tile], d)).sum();
            if s >= TEMPERATURE {
                out.push((pos, tile));
            }
        }
    }
    out
}

/// Returns `assembly` extended by `pos -> tile`; the input is left untouched.
pub fn attach(tas: &Tas, assembly: &Assembly, pos: Pos, tile: usize) -> Result<Assembly, AtamError> {
    let strength = binding_strength(tas, assembly, pos, tile)?;
    if strength < TEMPERATURE {
        return Err(AtamError::IllegalAttachment { pos, tile, strength });
    }
    let mut next = assembly.clone();
    next.insert(pos, tile);
    Ok(next)
}

pub fn is_terminal(tas: &Tas, assembly: &Assembly) -> bool {
    frontier(tas, assembly).is_empty()
}

/// Whether `to` can be grown from `from` by legal attachments. Adding tiles
/// never removes a binding, so placing attachable cells greedily decides it.
pub fn is_reachable(tas: &Tas, from: &Assembly, to: &Assembly) -> bool {
    if !from.is_subset_of(to) {
        return false;
    }
    let mut current = from.clone();
    let mut pending = to.difference(from);
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&(pos, tile)| {
            if binding_strength(tas, &current, pos, tile).is_ok_and(|s| s >= TEMPERATURE) {
                current.insert(pos, tile);
                false
            } else {
                true
            }
        });
        if pending.len() == before {
            return false;
        }
    }
    true
}

pub fn is_producible(tas: &Tas, assembly: &Assembly) -> bool {
    is_reachable(tas, &tas.seed_assembly(), assembly)
}

/// One attachment step: position and tile index.
pub type Placement = (Pos, usize);

/// Bounded breadth-first closure of the seed assembly under [`attach`].
///
/// Only assemblies with at most `bound` tiles are kept; the result is flagged
/// truncated when some kept assembly of exactly `bound` tiles could still grow.
pub fn explore(tas: &Tas, bound: usize) -> Exploration<Assembly, Placement> {
    explore_ordered(tas, bound, |_| {})
}

/// [`explore`] with a hook that may reorder each frontier before expansion.
pub(crate) fn explore_ordered(
    tas: &Tas,
    bound: usize,
    mut reorder: impl FnMut(&mut Vec<Placement>),
) -> Exploration<Assembly, Placement> {
    let bound = bound.max(1);
    let mut ex = Exploration::new(tas.seed_assembly(), bound);
    let mut cursor = 0;
    while cursor < ex.len() {
        let current = ex.state(cursor).clone();
        let mut moves = frontier(tas, &current);
        if current.len() >= bound {
            if !moves.is_empty() {
                ex.mark_truncated();
            }
            cursor += 1;
            continue;
        }
        reorder(&mut moves);
        for (pos, tile) in moves {
            let mut next = current.clone();
            next.insert(pos, tile);
            ex.add_transition(cursor, next, (pos, tile));
        }
        cursor += 1;
    }
    ex
}

/// An assembly sequence starting from the seed at the origin.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AssemblySequence {
    steps: Vec<Placement>,
}

impl AssemblySequence {
    pub fn new(steps: Vec<Placement>) -> AssemblySequence {
        AssemblySequence { steps }
    }

    pub fn steps(&self) -> &[Placement] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, pos: Pos, tile: usize) {
        self.steps.push((pos, tile));
    }

    /// Replays the sequence, checking every step against the attachment rule.
    pub fn replay(&self, tas: &Tas) -> Result<Assembly, AtamError> {
        let mut a = tas.seed_assembly();
        for &(pos, tile) in &self.steps {
            a = attach(tas, &a, pos, tile)?;
        }
        Ok(a)
    }

    /// Assembly just before the step placing `pos`, plus that step's tile.
    fn prefix_before(&self, tas: &Tas, pos: Pos) -> Result<(Assembly, usize), AtamError> {
        let mut a = tas.seed_assembly();
        for &(p, tile) in &self.steps {
            if p == pos {
                return Ok((a, tile));
            }
            a = attach(tas, &a, p, tile)?;
        }
        Err(AtamError::NoAttachmentRecord(pos))
    }
}

/// Runs a random assembly sequence, choosing uniformly among frontier
/// elements with a ChaCha stream seeded by `rng_seed`.
pub fn sample_sequence(tas: &Tas, rng_seed: u64, max_steps: usize) -> AssemblySequence {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut a = tas.seed_assembly();
    let mut seq = AssemblySequence::default();
    while seq.len() < max_steps {
        let moves = frontier(tas, &a);
        if moves.is_empty() {
            break;
        }
        let (pos, tile) = moves[rng.random_range(0..moves.len())];
        a.insert(pos, tile);
        seq.push(pos, tile);
    }
    seq
}

/// Sides on which the tile placed at `pos` initially bound.
pub fn in_sides(tas: &Tas, seq: &AssemblySequence, pos: Pos) -> Result<BTreeSet<Direction>, AtamError> {
    let (before, tile) = seq.prefix_before(tas, pos)?;
    let t = tas.tile(tile)?;
    Ok(Direction::ALL.into_iter().filter(|&d| matching_strength(tas, &before, pos, t, d) > 0).collect())
}
