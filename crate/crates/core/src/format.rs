//! Line-oriented tile-set format.
//!
//! ```text
//! # comment
//! temperature 2
//! tile seed N=b:2 E=a:2 S=-:0 W=-:0
//! tile tR   N=c:1 E=-:0 S=-:0 W=a:2
//! seed seed
//! ```
//!
//! Each `tile` line names all four sides as `DIR=GLUE:STRENGTH`, with `-`
//! for the null glue (strength 0, which may be omitted). Whitespace between
//! tokens is free. The `temperature` line is optional but must say 2.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::atam::{Direction, Glue, SidePad, Tas, TileType, TEMPERATURE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed system together with the source line of each tile definition.
#[derive(Debug, Clone)]
pub struct TasDocument {
    pub tas: Tas,
    pub tile_lines: Vec<usize>,
    pub seed_line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokKind {
    Word,
    Eq,
    Colon,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    kind: TokKind,
    text: &'a str,
    column: usize,
}

fn flush<'a>(start: &mut Option<usize>, end: usize, out: &mut Vec<Token<'a>>, line: &'a str) {
    if let Some(s) = start.take() {
        out.push(Token { kind: TokKind::Word, text: &line[s..end], column: s + 1 });
    }
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        match c {
            '#' => {
                flush(&mut start, i, &mut out, line);
                return out;
            }
            '=' | ':' => {
                flush(&mut start, i, &mut out, line);
                let kind = if c == '=' { TokKind::Eq } else { TokKind::Colon };
                out.push(Token { kind, text: &line[i..i + 1], column: i + 1 });
            }
            c if c.is_whitespace() => flush(&mut start, i, &mut out, line),
            _ => {
                if start.is_none() {
                    start = Some(i);
                }
            }
        }
    }
    flush(&mut start, line.len(), &mut out, line);
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

struct LineCursor<'a> {
    line: usize,
    toks: Vec<Token<'a>>,
    at: usize,
    end_column: usize,
}

impl<'a> LineCursor<'a> {
    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or_else(|| err(self.line, self.end_column, format!("expected {what}")))?;
        self.at += 1;
        Ok(t)
    }

    fn word(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(what)?;
        if t.kind != TokKind::Word {
            return Err(err(self.line, t.column, format!("expected {what}, found '{}'", t.text)));
        }
        Ok(t)
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self.next(what)?;
        if t.kind != kind {
            return Err(err(self.line, t.column, format!("expected {what}, found '{}'", t.text)));
        }
        Ok(t)
    }

    fn peek_kind(&self) -> Option<TokKind> {
        self.toks.get(self.at).map(|t| t.kind)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.at) {
            Some(t) => Err(err(self.line, t.column, format!("unexpected '{}'", t.text))),
            None => Ok(()),
        }
    }
}

fn parse_side(cur: &mut LineCursor<'_>) -> Result<(Direction, SidePad, usize), ParseError> {
    let dir_tok = cur.word("side direction")?;
    let dir = match dir_tok.text {
        "N" | "E" | "S" | "W" => Direction::from_letter(dir_tok.text.chars().next().unwrap()).unwrap(),
        other => {
            return Err(err(cur.line, dir_tok.column, format!("unknown direction '{other}'")));
        }
    };
    cur.expect(TokKind::Eq, "'='")?;
    let glue_tok = cur.word("glue")?;
    let glue = if glue_tok.text == "-" { Glue::Null } else { Glue::label(glue_tok.text) };
    let strength =
        if cur.peek_kind() == Some(TokKind::Colon) {
            cur.expect(TokKind::Colon, "':'")?;
            let s_tok = cur.word("strength")?;
            s_tok.text.parse::<u8>().ok().filter(|s| *s <= 2).ok_or_else(|| {
                err(cur.line, s_tok.column, format!("strength must be 0, 1 or 2, found '{}'", s_tok.text))
            })?
        } else if glue.is_null() {
            0
        } else {
            return Err(err(cur.line, glue_tok.column, format!("glue '{}' needs a strength", glue_tok.text)));
        };
    let pad = SidePad::new(glue, strength).map_err(|e| err(cur.line, glue_tok.column, e.to_string()))?;
    Ok((dir, pad, dir_tok.column))
}

pub fn parse_tas(text: &str) -> Result<TasDocument, ParseError> {
    let mut tiles: Vec<TileType> = Vec::new();
    let mut tile_lines = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut seed: Option<(String, usize, usize)> = None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        let mut cur = LineCursor { line, toks, at: 0, end_column: raw.len() + 1 };
        let kw = cur.word("keyword")?;
        match kw.text {
            "temperature" => {
                let t = cur.word("temperature value")?;
                match t.text.parse::<u32>() {
                    Ok(v) if v == TEMPERATURE as u32 => {}
                    _ => {
                        return Err(err(
                            line,
                            t.column,
                            format!("only temperature 2 is supported, found '{}'", t.text),
                        ));
                    }
                }
                cur.finish()?;
            }
            "tile" => {
                let name = cur.word("tile name")?;
                if name.text == "-" {
                    return Err(err(line, name.column, "'-' is not a valid tile name"));
                }
                if names.contains_key(name.text) {
                    return Err(err(line, name.column, format!("duplicate tile name '{}'", name.text)));
                }
                let mut sides: [Option<SidePad>; 4] = Default::default();
                for _ in 0..4 {
                    let (d, pad, col) = parse_side(&mut cur)?;
                    if sides[d.index()].is_some() {
                        return Err(err(line, col, format!("side {d} given twice")));
                    }
                    sides[d.index()] = Some(pad);
                }
                cur.finish()?;
                let sides = sides.map(|s| s.expect("all four sides parsed"));
                names.insert(name.text.to_string(), tiles.len());
                tiles.push(TileType::new(name.text, sides));
                tile_lines.push(line);
            }
            "seed" => {
                let name = cur.word("seed tile name")?;
                cur.finish()?;
                if seed.is_some() {
                    return Err(err(line, kw.column, "seed given twice"));
                }
                seed = Some((name.text.to_string(), line, name.column));
            }
            other => return Err(err(line, kw.column, format!("unknown keyword '{other}'"))),
        }
    }

    let (seed_name, seed_line, seed_col) = seed.ok_or_else(|| err(last_line.max(1), 1, "missing 'seed' line"))?;
    let seed_index =
        *names.get(&seed_name).ok_or_else(|| err(seed_line, seed_col, format!("unknown seed tile '{seed_name}'")))?;
    let tas = Tas::new(tiles, seed_index).map_err(|e| err(seed_line, 1, e.to_string()))?;
    Ok(TasDocument { tas, tile_lines, seed_line })
}

/// Canonical text form; [`parse_tas`] reads it back to an equal system.
pub fn print_tas(tas: &Tas) -> String {
    let mut out = String::from("temperature 2\n");
    for t in tas.tiles() {
        write!(out, "tile {}", t.name()).unwrap();
        for d in Direction::ALL {
            let p = t.side(d);
            write!(out, " {d}={}:{}", p.glue(), p.strength()).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "seed {}", tas.tiles()[tas.seed()].name()).unwrap();
    out
}
