//! Table lookup: given an address and random bits, find the output pads.
//!
//! [`direct_lookup`] parses `w` and indexes it. [`trace_lookup`] sweeps the
//! spliced table one column at a time the way the assembling supertile reads
//! it: count entries up to the address, count its sub-entries `n`, count the
//! remaining entries `m` up to the middle marker, then pick `p = b mod n`,
//! count `m` entries back down through the mirrored copy, count `p`
//! sub-entries and collect the selected pads. Both routes must agree.

use std::fmt;

use thiserror::Error;

use crate::atam::Direction;
use crate::encode::{decode_pad, BitString, GlueOrdering, LookupTable, Pad, SubEntry, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LookupError {
    #[error("address {addr} is outside the table ({entries} entries)")]
    AddressRange { addr: u64, entries: u64 },
    #[error("entry {addr} is empty")]
    EmptyEntry { addr: u64, trace: Option<Box<PhaseTrace>> },
    #[error("sub-entry {p} out of range for {n} sub-entries")]
    Selection { p: u64, n: u64 },
    #[error("malformed entry: {0}")]
    EntryFormat(String),
    #[error("malformed table at column {column}: {reason}")]
    TableFormat { column: usize, reason: String },
}

/// Parses one `#`-prefixed entry into its sub-entries.
pub fn parse_entry(entry: &str, ord: &GlueOrdering) -> Result<Vec<SubEntry>, LookupError> {
    let body = entry
        .strip_prefix('#')
        .ok_or_else(|| LookupError::EntryFormat(format!("entry {entry:?} does not start with '#'")))?;
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(';').map(|sub| parse_sub_entry(sub, ord)).collect()
}

fn parse_sub_entry(sub: &str, ord: &GlueOrdering) -> Result<SubEntry, LookupError> {
    let fields: Vec<&str> = sub.split(',').collect();
    if fields.len() != 4 {
        return Err(LookupError::EntryFormat(format!("sub-entry {sub:?} has {} commas, expected 3", fields.len() - 1)));
    }
    let mut out: [Option<Pad>; 4] = Default::default();
    for (field, d) in fields.iter().zip(Direction::ALL) {
        if field.is_empty() {
            continue;
        }
        let bits: BitString = field.parse().map_err(LookupError::EntryFormat)?;
        let pad = decode_pad(&bits.reversed(), ord).map_err(|e| LookupError::EntryFormat(e.to_string()))?;
        if pad.direction() != d {
            return Err(LookupError::EntryFormat(format!("{d} field holds a {} pad", pad.direction())));
        }
        out[d.index()] = Some(pad);
    }
    Ok(SubEntry { out })
}

/// Reference lookup: sub-entry `p` of entry `addr` of `w`.
pub fn direct_lookup(w: &str, ord: &GlueOrdering, addr: u64, p: u64) -> Result<SubEntry, LookupError> {
    let entry = w
        .split('#')
        .skip(1)
        .nth(addr as usize)
        .ok_or_else(|| LookupError::AddressRange { addr, entries: w.matches('#').count() as u64 })?;
    let subs = parse_entry(&format!("#{entry}"), ord)?;
    if subs.is_empty() {
        return Err(LookupError::EmptyEntry { addr, trace: None });
    }
    let n = subs.len() as u64;
    subs.into_iter().nth(p as usize).ok_or(LookupError::Selection { p, n })
}

/// `b mod n`, reading `b` most significant bit first.
pub fn mod_select(b: &BitString, n: u64) -> Result<u64, LookupError> {
    if n == 0 {
        return Err(LookupError::Selection { p: 0, n: 0 });
    }
    let n = n as u128;
    Ok(b.bits().iter().fold(0u128, |acc, bit| (acc * 2 + *bit as u128) % n) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Start,
    SearchEntry,
    CountSubEntries,
    CountRemaining,
    Middle,
    CountdownEntries,
    SelectSubEntry,
    Extract,
    Propagate,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Start => "start",
            Phase::SearchEntry => "search",
            Phase::CountSubEntries => "count-n",
            Phase::CountRemaining => "count-m",
            Phase::Middle => "middle",
            Phase::CountdownEntries => "countdown-m",
            Phase::SelectSubEntry => "countdown-p",
            Phase::Extract => "extract",
            Phase::Propagate => "propagate",
        };
        f.write_str(s)
    }
}

/// One swept column: its symbol, the phase it was read in and that phase's
/// counter after reading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnNote {
    pub column: usize,
    pub symbol: Symbol,
    pub phase: Phase,
    pub counter: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseTrace {
    /// Entry counter when the addressed entry was found.
    pub counter_at_match: u64,
    pub match_column: usize,
    /// Sub-entries in the addressed entry.
    pub n: u64,
    /// Entries after the addressed one in the first copy.
    pub m: u64,
    pub middle_column: usize,
    pub b: BitString,
    pub p: Option<u64>,
    /// Column at which the reverse entry countdown reached zero.
    pub countdown_zero_column: Option<usize>,
    /// First column of the selected (mirrored) sub-entry.
    pub selected_column: Option<usize>,
    /// Index of the selected sub-entry counted in mirrored order.
    pub mirrored_index: Option<u64>,
    pub columns: Vec<ColumnNote>,
}

impl PhaseTrace {
    /// One line per column: `column symbol phase counter`.
    pub fn render_columns(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            out.push_str(&format!("{} {} {} {}\n", c.column, c.symbol.to_char(), c.phase, c.counter));
        }
        out
    }
}

/// What the sweep selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSelection {
    pub sub_entry: SubEntry,
    /// Index of the selected sub-entry in original (unmirrored) order.
    pub selected_index: u64,
    pub sub_entry_count: u64,
}

fn table_err(column: usize, reason: impl Into<String>) -> LookupError {
    LookupError::TableFormat { column, reason: reason.into() }
}

/// Symbol columns of the table in sweep order. Blank columns carry the state
/// of the symbol before them unchanged, so they are only visited when notes
/// are recorded.
struct Sweep<'a> {
    dense: &'a [Symbol],
    len: usize,
    // index into `dense` of the next symbol column
    at: usize,
    record: bool,
    notes: Vec<ColumnNote>,
}

impl Sweep<'_> {
    #[inline]
    fn next(&mut self) -> Option<(usize, Symbol)> {
        let i = self.at;
        let s = *self.dense.get(i)?;
        self.at += 1;
        Some((2 * i, s))
    }

    #[inline]
    fn note(&mut self, column: usize, symbol: Symbol, phase: Phase, counter: u64) {
        if self.record {
            self.notes.push(ColumnNote { column, symbol, phase, counter });
            if column + 1 < self.len {
                self.notes.push(ColumnNote { column: column + 1, symbol: Symbol::Blank, phase, counter });
            }
        }
    }

    #[inline]
    fn peek(&self) -> Option<Symbol> {
        self.dense.get(self.at).copied()
    }

    /// Consumes columns up to and including the `limit`-th `#`, stopping early
    /// in front of a `<`. Returns the number of `#` consumed. Each column is
    /// noted with `label(count so far)`.
    fn count_hashes(&mut self, phase: Phase, limit: u64, label: impl Fn(u64) -> u64) -> Result<u64, LookupError> {
        let dense = self.dense;
        let mut k = 0u64;
        for (i, &s) in dense[self.at..].iter().enumerate() {
            match s {
                Symbol::Lt => {
                    self.at += i;
                    return Ok(k);
                }
                Symbol::Hash => k += 1,
                _ => {}
            }
            if self.record {
                self.note(2 * (self.at + i), s, phase, label(k));
            }
            if k == limit {
                self.at += i + 1;
                return Ok(k);
            }
        }
        self.at = dense.len();
        Err(self.ended(phase))
    }

    fn ended(&self, phase: Phase) -> LookupError {
        table_err(self.len, format!("table ended during phase {phase}"))
    }
}

/// Column sweep over the spliced table. With `record_columns` every column is
/// annotated in the returned trace.
pub fn trace_lookup(
    table: &LookupTable,
    ord: &GlueOrdering,
    addr: u64,
    b: &BitString,
    record_columns: bool,
) -> Result<(TableSelection, PhaseTrace), LookupError> {
    if let Some(c) = table.misplaced_blank() {
        return Err(table_err(c, "blank columns must alternate with symbol columns"));
    }
    let mut sw =
        Sweep { dense: table.symbol_columns(), len: table.len(), at: 0, record: record_columns, notes: Vec::new() };
    let mut trace = PhaseTrace { b: b.clone(), ..PhaseTrace::default() };

    match sw.next() {
        Some((c, Symbol::Gt)) => sw.note(c, Symbol::Gt, Phase::Start, 0),
        Some((c, _)) => return Err(table_err(c, "table must open with '>'")),
        None => return Err(sw.ended(Phase::Start)),
    }

    // phase 1: find the entry, count its sub-entries, count the entries after it
    let seen = sw.count_hashes(Phase::SearchEntry, addr.saturating_add(1), |k| k.saturating_sub(1))?;
    if seen <= addr {
        return Err(LookupError::AddressRange { addr, entries: seen });
    }
    trace.counter_at_match = addr;
    trace.match_column = 2 * (sw.at - 1);

    let mut n = 0u64;
    loop {
        match sw.peek().ok_or_else(|| sw.ended(Phase::CountSubEntries))? {
            Symbol::Hash | Symbol::Lt => break,
            s => {
                let (c, _) = sw.next().expect("peeked");
                match s {
                    Symbol::Semi => n += 1,
                    _ if n == 0 => n = 1,
                    _ => {}
                }
                sw.note(c, s, Phase::CountSubEntries, n);
            }
        }
    }
    trace.n = n;

    let m = sw.count_hashes(Phase::CountRemaining, u64::MAX, |k| k)?;
    trace.m = m;
    let (c, s) = sw.next().expect("stopped in front of '<'");

    sw.note(c, s, Phase::Middle, 0);
    for expected in [Symbol::Percent, Symbol::Percent, Symbol::Gt] {
        let (c, s) = sw.next().ok_or_else(|| sw.ended(Phase::Middle))?;
        if s != expected {
            return Err(table_err(c, "malformed middle marker"));
        }
        sw.note(c, s, Phase::Middle, 0);
        trace.middle_column = c;
    }

    if n == 0 {
        trace.columns = sw.notes;
        return Err(LookupError::EmptyEntry { addr, trace: Some(Box::new(trace)) });
    }

    // phase 2: count back down to the mirrored entry, then to the sub-entry
    let p = mod_select(b, n)?;
    trace.p = Some(p);
    let countdown = m;
    if countdown == 0 {
        trace.countdown_zero_column = Some(trace.middle_column);
    }
    if countdown > 0 {
        let k = sw.count_hashes(Phase::CountdownEntries, countdown, |k| countdown - k)?;
        if k < countdown {
            return Err(table_err(2 * sw.at, "mirrored copy has fewer entries than counted"));
        }
        trace.countdown_zero_column = Some(2 * (sw.at - 1));
    }

    let mut remaining = p;
    while remaining > 0 {
        let (c, s) = sw.next().ok_or_else(|| sw.ended(Phase::SelectSubEntry))?;
        match s {
            Symbol::Semi => remaining -= 1,
            Symbol::Hash | Symbol::Lt => {
                return Err(table_err(c, "mirrored entry has fewer sub-entries than counted"));
            }
            _ => {}
        }
        sw.note(c, s, Phase::SelectSubEntry, remaining);
    }
    trace.mirrored_index = Some(p);
    trace.selected_column = Some(2 * sw.at);

    let mut fields = vec![BitString::default()];
    loop {
        let (c, s) = sw.next().ok_or_else(|| sw.ended(Phase::Extract))?;
        match s {
            Symbol::Zero | Symbol::One => {
                fields.last_mut().expect("field open").extend(&BitString::new(vec![s == Symbol::One]))
            }
            Symbol::Comma => fields.push(BitString::default()),
            Symbol::Semi | Symbol::Hash => {}
            _ => return Err(table_err(c, "unexpected symbol inside a sub-entry")),
        }
        sw.note(c, s, Phase::Extract, fields.len() as u64);
        if matches!(s, Symbol::Semi | Symbol::Hash) {
            break;
        }
    }

    let mut last = None;
    if sw.record {
        while let Some((c, s)) = sw.next() {
            sw.note(c, s, Phase::Propagate, 0);
            last = Some(s);
        }
    } else if sw.at < sw.dense.len() {
        // nothing is decided after extraction; only the closing marker matters
        last = sw.dense.last().copied();
        sw.at = sw.dense.len();
    }
    if last != Some(Symbol::Lt) {
        return Err(table_err(table.len(), "table must close with '<'"));
    }
    trace.columns = sw.notes;

    if fields.len() != 4 {
        return Err(table_err(table.len(), format!("selected sub-entry has {} fields", fields.len())));
    }
    // mirrored sub-entries list their fields as W, S, E, N with pads unreversed
    let mut out: [Option<Pad>; 4] = Default::default();
    for (bits, d) in fields.iter().zip([Direction::W, Direction::S, Direction::E, Direction::N]) {
        if bits.is_empty() {
            continue;
        }
        let pad = decode_pad(bits, ord).map_err(|e| table_err(table.len(), e.to_string()))?;
        if pad.direction() != d {
            return Err(table_err(table.len(), format!("{d} field holds a {} pad", pad.direction())));
        }
        out[d.index()] = Some(pad);
    }
    let selection = TableSelection { sub_entry: SubEntry { out }, selected_index: n - 1 - p, sub_entry_count: n };
    Ok((selection, trace))
}
