//! Binary glue lookup-table encoding of a tile set.
//!
//! A pad `(glue, direction, strength)` is encoded as the glue's index in a
//! fixed ordering (null first, `width` bits), two direction bits
//! (`N=00 E=01 S=10 W=11`) and one strength bit (`1 -> 0`, `2 -> 1`).
//! Addresses key every set of sides of a tile whose strengths sum to exactly
//! two; the string `w` lists one `#`-marked entry per address value, and the
//! table is `w` and its reverse joined by `<%%>`, wrapped in `>`/`<`, with a
//! blank between every pair of symbols.
//!
//! # Compiled artifact
//!
//! [`CompiledSystem::to_text`] writes a line-oriented artifact:
//!
//! ```text
//! GLUES
//! width <w>
//! <index> <label or ->            one line per glue, null first
//! PARAMS
//! c <scale>
//! cprime <spacer>
//! bits <random-bit width>
//! width <w>
//! entries <entry count>
//! ADDRESSES
//! <value> <bits> <tile name>...   ascending by value
//! TABLE
//! <table symbols, blank written as _>
//! END
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::atam::{Direction, Glue, SidePad, Tas};
use crate::consistency::verify_locally_consistent;
use crate::macrosim::BlockState;

/// Upper limit on `1 + max address` accepted by [`compile`].
pub const MAX_ENTRIES: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("glue {0} is not in the glue ordering")]
    UnknownGlue(Glue),
    #[error("pad strength {0} is not encodable (must be 1 or 2)")]
    BadStrength(u8),
    #[error("null glue cannot form a pad")]
    NullPad,
    #[error("cannot decode pad from {bits}: {reason}")]
    Decode { bits: String, reason: String },
    #[error("invalid address: {0}")]
    Address(String),
    #[error("system has no addresses; nothing can attach to the seed")]
    NoAddresses,
    #[error("lookup table would need {0} entries (limit {MAX_ENTRIES})")]
    TableTooLarge(u64),
    #[error("system is not locally consistent: {0}")]
    NotLocallyConsistent(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("no tile entry at address {0}")]
    NoSuchAddress(u64),
}

/// Smallest `k` with `2^k >= n`.
pub fn ceil_log2(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueOrdering {
    glues: Vec<Glue>,
    width: usize,
}

impl GlueOrdering {
    /// Null first, then `labels` in the given order.
    pub fn from_labels<I: IntoIterator<Item = String>>(labels: I) -> GlueOrdering {
        let mut glues = vec![Glue::Null];
        glues.extend(labels.into_iter().map(Glue::Label));
        let width = ceil_log2(glues.len() as u64 + 1).max(1);
        GlueOrdering { glues, width }
    }

    pub fn glues(&self) -> &[Glue] {
        &self.glues
    }

    /// Bits used for a glue index.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Length of an encoded pad.
    pub fn pad_len(&self) -> usize {
        self.width + 3
    }

    pub fn index_of(&self, g: &Glue) -> Option<usize> {
        self.glues.iter().position(|x| x == g)
    }
}

/// Null first, then every positive-strength glue label sorted lexicographically.
pub fn glue_ordering(tas: &Tas) -> GlueOrdering {
    let labels: BTreeSet<String> = tas
        .tiles()
        .iter()
        .flat_map(|t| t.sides().iter())
        .filter(|p| p.strength() > 0)
        .filter_map(|p| match p.glue() {
            Glue::Label(l) => Some(l.clone()),
            Glue::Null => None,
        })
        .collect();
    GlueOrdering::from_labels(labels)
}

/// An encodable pad: a non-null glue on one side with strength 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pad {
    glue: Glue,
    direction: Direction,
    strength: u8,
}

impl Pad {
    pub fn new(glue: Glue, direction: Direction, strength: u8) -> Result<Pad, EncodeError> {
        if glue.is_null() {
            return Err(EncodeError::NullPad);
        }
        if !(1..=2).contains(&strength) {
            return Err(EncodeError::BadStrength(strength));
        }
        Ok(Pad { glue, direction, strength })
    }

    /// The pad on side `d` of a tile, or `None` for the null glue.
    pub fn from_side(side: &SidePad, d: Direction) -> Option<Pad> {
        Pad::new(side.glue().clone(), d, side.strength()).ok()
    }

    pub fn glue(&self) -> &Glue {
        &self.glue
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn strength(&self) -> u8 {
        self.strength
    }

    /// The same glue seen from the neighbor across this side.
    pub fn facing(&self) -> Pad {
        Pad { glue: self.glue.clone(), direction: self.direction.opposite(), strength: self.strength }
    }
}

impl fmt::Display for Pad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}:{}", self.direction, self.glue, self.strength)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> BitString {
        BitString(bits)
    }

    pub fn zeros(len: usize) -> BitString {
        BitString(vec![false; len])
    }

    /// `value` written in exactly `len` bits, most significant first.
    pub fn from_value(value: u64, len: usize) -> BitString {
        BitString((0..len).rev().map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Integer reading, most significant bit first; `None` past 64 bits.
    pub fn value(&self) -> Option<u64> {
        let first_one = self.0.iter().position(|b| *b).unwrap_or(self.0.len());
        if self.0.len() - first_one > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, b| acc.wrapping_shl(1) | *b as u64))
    }

    pub fn reversed(&self) -> BitString {
        BitString(self.0.iter().rev().copied().collect())
    }

    pub fn extend(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit '{other}'")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

fn direction_bits(d: Direction) -> [bool; 2] {
    match d {
        Direction::N => [false, false],
        Direction::E => [false, true],
        Direction::S => [true, false],
        Direction::W => [true, true],
    }
}

pub fn bin_pad(p: &Pad, ord: &GlueOrdering) -> Result<BitString, EncodeError> {
    if !(1..=2).contains(&p.strength) {
        return Err(EncodeError::BadStrength(p.strength));
    }
    let index = ord.index_of(&p.glue).ok_or_else(|| EncodeError::UnknownGlue(p.glue.clone()))?;
    let mut bits = BitString::from_value(index as u64, ord.width);
    bits.0.extend(direction_bits(p.direction));
    bits.0.push(p.strength == 2);
    Ok(bits)
}

pub fn decode_pad(bits: &BitString, ord: &GlueOrdering) -> Result<Pad, EncodeError> {
    let fail = |reason: String| EncodeError::Decode { bits: bits.to_string(), reason };
    if bits.len() != ord.pad_len() {
        return Err(fail(format!("expected {} bits, found {}", ord.pad_len(), bits.len())));
    }
    let index = BitString(bits.0[..ord.width].to_vec()).value().unwrap_or(u64::MAX) as usize;
    let glue = ord.glues.get(index).cloned().ok_or_else(|| fail(format!("glue index {index} out of range")))?;
    if glue.is_null() {
        return Err(fail("null glue index".into()));
    }
    let direction = match (bits.0[ord.width], bits.0[ord.width + 1]) {
        (false, false) => Direction::N,
        (false, true) => Direction::E,
        (true, false) => Direction::S,
        (true, true) => Direction::W,
    };
    let strength = if bits.0[ord.width + 2] { 2 } else { 1 };
    Ok(Pad { glue, direction, strength })
}

/// Order in which two strength-1 pads appear in an address.
pub const PAIR_ORDER: [(Direction, Direction); 6] = [
    (Direction::E, Direction::N),
    (Direction::S, Direction::E),
    (Direction::W, Direction::S),
    (Direction::N, Direction::W),
    (Direction::N, Direction::S),
    (Direction::E, Direction::W),
];

/// Ordered direction pair for two distinct sides.
pub fn canonical_pair(a: Direction, b: Direction) -> Option<(Direction, Direction)> {
    PAIR_ORDER.iter().copied().find(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    bits: BitString,
    value: u64,
    pads: Vec<Pad>,
}

impl Address {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Input pads in address order.
    pub fn pads(&self) -> &[Pad] {
        &self.pads
    }

    pub fn directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.pads.iter().map(|p| p.direction)
    }

    pub fn has_direction(&self, d: Direction) -> bool {
        self.pads.iter().any(|p| p.direction == d)
    }
}

pub fn address_of(pads: &[Pad], ord: &GlueOrdering) -> Result<Address, EncodeError> {
    let (bits, ordered) = match pads {
        [p] => {
            if p.strength != 2 {
                return Err(EncodeError::Address(format!("single pad {p} must have strength 2")));
            }
            let mut bits = BitString::zeros(ord.pad_len());
            bits.extend(&bin_pad(p, ord)?);
            (bits, vec![p.clone()])
        }
        [p, q] => {
            if p.strength != 1 || q.strength != 1 {
                return Err(EncodeError::Address(format!("pads {p} and {q} must both have strength 1")));
            }
            let (first, second) = canonical_pair(p.direction, q.direction)
                .ok_or_else(|| EncodeError::Address(format!("duplicate direction {}", p.direction)))?;
            let (a, b) = if p.direction == first { (p, q) } else { (q, p) };
            debug_assert_eq!(b.direction, second);
            let mut bits = bin_pad(a, ord)?;
            bits.extend(&bin_pad(b, ord)?);
            (bits, vec![a.clone(), b.clone()])
        }
        _ => {
            return Err(EncodeError::Address(format!("expected 1 or 2 pads, found {}", pads.len())));
        }
    };
    let value = bits.value().ok_or_else(|| EncodeError::Address("address wider than 64 bits".into()))?;
    Ok(Address { bits, value, pads: ordered })
}

/// An address together with the tile types it selects, in tile-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressEntry {
    pub address: Address,
    pub tiles: Vec<usize>,
}

/// Every strength-2 side and every pair of strength-1 sides, keyed by address value.
pub fn addresses(tas: &Tas, ord: &GlueOrdering) -> Result<BTreeMap<u64, AddressEntry>, EncodeError> {
    let mut out: BTreeMap<u64, AddressEntry> = BTreeMap::new();
    for (ti, t) in tas.tiles().iter().enumerate() {
        let pads: Vec<Pad> = Direction::ALL.iter().filter_map(|&d| Pad::from_side(t.side(d), d)).collect();
        let mut combos: Vec<Vec<Pad>> = pads.iter().filter(|p| p.strength == 2).map(|p| vec![p.clone()]).collect();
        let ones: Vec<&Pad> = pads.iter().filter(|p| p.strength == 1).collect();
        for i in 0..ones.len() {
            for j in i + 1..ones.len() {
                combos.push(vec![ones[i].clone(), ones[j].clone()]);
            }
        }
        for combo in combos {
            let address = address_of(&combo, ord)?;
            out.entry(address.value).or_insert_with(|| AddressEntry { address, tiles: Vec::new() }).tiles.push(ti);
        }
    }
    Ok(out)
}

/// Output pads of one candidate tile; input sides and null glues are `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SubEntry {
    pub out: [Option<Pad>; 4],
}

impl SubEntry {
    pub fn get(&self, d: Direction) -> Option<&Pad> {
        self.out[d.index()].as_ref()
    }

    pub fn for_tile(tas: &Tas, tile: usize, address: &Address) -> SubEntry {
        let t = &tas.tiles()[tile];
        let mut out: [Option<Pad>; 4] = Default::default();
        for d in Direction::ALL {
            if !address.has_direction(d) {
                out[d.index()] = Pad::from_side(t.side(d), d);
            }
        }
        SubEntry { out }
    }
}

fn write_sub_entry(out: &mut String, sub: &SubEntry, ord: &GlueOrdering) -> Result<(), EncodeError> {
    for (i, d) in Direction::ALL.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        if let Some(p) = sub.get(*d) {
            write!(out, "{}", bin_pad(p, ord)?.reversed()).unwrap();
        }
    }
    Ok(())
}

/// Entries `e_0 .. e_max`; non-addresses are a bare `#`.
pub fn build_w_from(tas: &Tas, ord: &GlueOrdering, table: &BTreeMap<u64, AddressEntry>) -> Result<String, EncodeError> {
    let max = *table.keys().next_back().ok_or(EncodeError::NoAddresses)?;
    if max >= MAX_ENTRIES {
        return Err(EncodeError::TableTooLarge(max + 1));
    }
    let mut w = String::with_capacity(max as usize + 1);
    let mut next = 0u64;
    for (&value, entry) in table {
        while next < value {
            w.push('#');
            next += 1;
        }
        w.push('#');
        for (k, &tile) in entry.tiles.iter().enumerate() {
            if k > 0 {
                w.push(';');
            }
            write_sub_entry(&mut w, &SubEntry::for_tile(tas, tile, &entry.address), ord)?;
        }
        next += 1;
    }
    Ok(w)
}

pub fn build_w(tas: &Tas, ord: &GlueOrdering) -> Result<String, EncodeError> {
    build_w_from(tas, ord, &addresses(tas, ord)?)
}

/// Table alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Symbol {
    Zero,
    One,
    Hash,
    Semi,
    Comma,
    Lt,
    Gt,
    Percent,
    Blank,
}

impl Symbol {
    pub fn from_char(c: char) -> Option<Symbol> {
        Some(match c {
            '0' => Symbol::Zero,
            '1' => Symbol::One,
            '#' => Symbol::Hash,
            ';' => Symbol::Semi,
            ',' => Symbol::Comma,
            '<' => Symbol::Lt,
            '>' => Symbol::Gt,
            '%' => Symbol::Percent,
            '_' => Symbol::Blank,
            _ => return None,
        })
    }

    /// Character form; blank renders as `_`.
    pub fn to_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Hash => '#',
            Symbol::Semi => ';',
            Symbol::Comma => ',',
            Symbol::Lt => '<',
            Symbol::Gt => '>',
            Symbol::Percent => '%',
            Symbol::Blank => '_',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupTable {
    symbols: Vec<Symbol>,
    // symbols at even columns, i.e. the table without its blanks
    dense: Vec<Symbol>,
    // first column breaking the symbol/blank alternation
    misplaced_blank: Option<usize>,
}

impl LookupTable {
    pub fn from_symbols(symbols: Vec<Symbol>) -> LookupTable {
        let misplaced_blank = symbols.iter().enumerate().position(|(i, s)| (*s == Symbol::Blank) != (i % 2 == 1));
        let dense = symbols.iter().step_by(2).copied().collect();
        LookupTable { symbols, dense, misplaced_blank }
    }

    /// Symbols at the even columns; entry `i` sits at column `2 * i`.
    pub fn symbol_columns(&self) -> &[Symbol] {
        &self.dense
    }

    /// First column where blanks and symbols fail to alternate.
    pub fn misplaced_blank(&self) -> Option<usize> {
        self.misplaced_blank
    }

    /// Parses the `_`-for-blank rendering.
    pub fn parse(text: &str) -> Option<LookupTable> {
        text.chars().map(Symbol::from_char).collect::<Option<Vec<_>>>().map(LookupTable::from_symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn render(&self) -> String {
        self.symbols.iter().map(|s| s.to_char()).collect()
    }

    /// The table with its blank columns removed.
    pub fn strip_blanks(&self) -> String {
        self.symbols.iter().filter(|s| **s != Symbol::Blank).map(|s| s.to_char()).collect()
    }
}

/// Inserts one blank between every pair of adjacent symbols.
pub fn splice_blanks(s: &str) -> Vec<Symbol> {
    let mut out = Vec::with_capacity((2 * s.len()).saturating_sub(1));
    for (i, c) in s.chars().enumerate() {
        if i > 0 {
            out.push(Symbol::Blank);
        }
        out.push(Symbol::from_char(c).expect("table alphabet"));
    }
    out
}

/// `sb(">" w "<%%>" reverse(w) "<")`.
pub fn table_from_w(w: &str) -> LookupTable {
    let mut raw = String::with_capacity(2 * w.len() + 6);
    raw.push('>');
    raw.push_str(w);
    raw.push_str("<%%>");
    raw.extend(w.chars().rev());
    raw.push('<');
    LookupTable::from_symbols(splice_blanks(&raw))
}

pub fn build_table(tas: &Tas) -> Result<LookupTable, EncodeError> {
    let ord = glue_ordering(tas);
    Ok(table_from_w(&build_w(tas, &ord)?))
}

/// Pad field written on an edge: the encoded pad, or all zeros for a null side.
pub fn edge_pad_field(tas: &Tas, ord: &GlueOrdering, tile: usize, d: Direction) -> Result<BitString, EncodeError> {
    match Pad::from_side(tas.tiles()[tile].side(d), d) {
        Some(p) => bin_pad(&p, ord),
        None => Ok(BitString::zeros(ord.pad_len())),
    }
}

/// `T ∘ pad ∘ 0^spacer ∘ pad ∘ T`, read W→E for N/S edges and S→N for E/W edges.
pub fn edge_string(
    tas: &Tas,
    ord: &GlueOrdering,
    table: &LookupTable,
    tile: usize,
    d: Direction,
    spacer: usize,
) -> Result<String, EncodeError> {
    let field = edge_pad_field(tas, ord, tile, d)?.to_string();
    let t = table.render();
    let mut s = String::with_capacity(2 * t.len() + 2 * field.len() + spacer);
    s.push_str(&t);
    s.push_str(&field);
    s.extend(std::iter::repeat_n('0', spacer));
    s.push_str(&field);
    s.push_str(&t);
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct CompileParams {
    /// Spacer length `c'`; defaults to one pad length.
    pub spacer: Option<usize>,
    /// Random-bit width; defaults to `max(4, 2 * ceil(log2(max candidates)))`.
    pub random_bits: Option<usize>,
    /// Skip the local-consistency precondition.
    pub force: bool,
    /// Exploration bound for the local-consistency precondition.
    pub lc_bound: usize,
}

impl Default for CompileParams {
    fn default() -> Self {
        CompileParams { spacer: None, random_bits: None, force: false, lc_bound: 25 }
    }
}

/// Everything the block-level simulator needs to run a system.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    pub source: Tas,
    pub glues: GlueOrdering,
    pub w: String,
    pub table: LookupTable,
    pub addresses: BTreeMap<u64, AddressEntry>,
    pub entry_count: u64,
    pub spacer: usize,
    pub random_bits: usize,
    /// Block side length: `2|T| + 2 * pad length + spacer`.
    pub scale: usize,
    pub seed_block: BlockState,
}

pub fn compile(tas: &Tas, params: &CompileParams) -> Result<CompiledSystem, EncodeError> {
    if !params.force {
        let report = verify_locally_consistent(tas, params.lc_bound);
        if let Some(w) = report.verdict.witness() {
            return Err(EncodeError::NotLocallyConsistent(w.to_string()));
        }
    }
    let glues = glue_ordering(tas);
    let addresses = addresses(tas, &glues)?;
    let w = build_w_from(tas, &glues, &addresses)?;
    let max_candidates = addresses.values().map(|e| e.tiles.len()).max().unwrap_or(1) as u64;
    let random_bits = match params.random_bits {
        Some(0) => return Err(EncodeError::Param("random-bit width must be at least 1".into())),
        Some(b) if b > 64 => return Err(EncodeError::Param("random-bit width must be at most 64".into())),
        Some(b) => b,
        None => (2 * ceil_log2(max_candidates)).max(4),
    };
    let spacer = params.spacer.unwrap_or(glues.pad_len());
    Ok(assemble(tas.clone(), glues, addresses, w, spacer, random_bits))
}

fn assemble(
    source: Tas,
    glues: GlueOrdering,
    addresses: BTreeMap<u64, AddressEntry>,
    w: String,
    spacer: usize,
    random_bits: usize,
) -> CompiledSystem {
    let table = table_from_w(&w);
    let entry_count = addresses.keys().next_back().map_or(0, |m| m + 1);
    let scale = 2 * table.len() + 2 * glues.pad_len() + spacer;
    let seed_block = BlockState::seed(&source);
    CompiledSystem { source, glues, w, table, addresses, entry_count, spacer, random_bits, scale, seed_block }
}

impl CompiledSystem {
    pub fn edge_string(&self, tile: usize, d: Direction) -> Result<String, EncodeError> {
        edge_string(&self.source, &self.glues, &self.table, tile, d, self.spacer)
    }

    /// Fault injection: exchanges the candidate tiles of two addresses and
    /// rebuilds the table, so each address serves the other's tiles.
    pub fn with_swapped_entries(&self, a: u64, b: u64) -> Result<CompiledSystem, EncodeError> {
        let mut addresses = self.addresses.clone();
        let ta = addresses.get(&a).ok_or(EncodeError::NoSuchAddress(a))?.tiles.clone();
        let tb = addresses.get(&b).ok_or(EncodeError::NoSuchAddress(b))?.tiles.clone();
        addresses.get_mut(&a).unwrap().tiles = tb;
        addresses.get_mut(&b).unwrap().tiles = ta;
        let w = build_w_from(&self.source, &self.glues, &addresses)?;
        Ok(assemble(self.source.clone(), self.glues.clone(), addresses, w, self.spacer, self.random_bits))
    }

    /// Text artifact; see the module documentation for the grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("GLUES\n");
        writeln!(out, "width {}", self.glues.width()).unwrap();
        for (i, g) in self.glues.glues().iter().enumerate() {
            writeln!(out, "{i} {g}").unwrap();
        }
        out.push_str("PARAMS\n");
        writeln!(out, "c {}", self.scale).unwrap();
        writeln!(out, "cprime {}", self.spacer).unwrap();
        writeln!(out, "bits {}", self.random_bits).unwrap();
        writeln!(out, "width {}", self.glues.width()).unwrap();
        writeln!(out, "entries {}", self.entry_count).unwrap();
        out.push_str("ADDRESSES\n");
        for (value, entry) in &self.addresses {
            write!(out, "{value} {}", entry.address.bits()).unwrap();
            for &t in &entry.tiles {
                write!(out, " {}", self.source.tiles()[t].name()).unwrap();
            }
            out.push('\n');
        }
        out.push_str("TABLE\n");
        out.push_str(&self.table.render());
        out.push_str("\nEND\n");
        out
    }
}
