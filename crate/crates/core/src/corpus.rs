//! Example systems used by the tests, the docs and the CLI fixtures under `corpus/`.

use crate::atam::{Direction, SidePad, Tas, TileType};

use Direction::{E, N, S, W};

fn pad(label: &str, strength: u8) -> SidePad {
    SidePad::labeled(label, strength)
}

/// Seed with a strength-2 arm east and north, one cooperative corner tile.
///
/// ```text
///   tU tD
///   seed tR
/// ```
pub fn elbow() -> Tas {
    Tas::new(elbow_tiles(), 0).expect("elbow is well formed")
}

fn elbow_tiles() -> Vec<TileType> {
    vec![
        TileType::with_sides("seed", &[(N, pad("b", 2)), (E, pad("a", 2))]),
        TileType::with_sides("tR", &[(W, pad("a", 2)), (N, pad("c", 1))]),
        TileType::with_sides("tU", &[(S, pad("b", 2)), (E, pad("c", 1))]),
        TileType::with_sides("tD", &[(W, pad("c", 1)), (S, pad("c", 1))]),
    ]
}

/// [`elbow`] plus `tDp`, which shares `tD`'s input pads but presents a
/// strength-1 `d` glue on its north side.
pub fn nondet_elbow() -> Tas {
    let mut tiles = elbow_tiles();
    tiles.push(TileType::with_sides("tDp", &[(W, pad("c", 1)), (S, pad("c", 1)), (N, pad("d", 1))]));
    Tas::new(tiles, 0).expect("nondet elbow is well formed")
}

/// Elbow variant whose corner tile binds with strength 2 from the south and
/// presents a mismatching strength-1 glue to its western neighbor.
pub fn mismatch_variant() -> Tas {
    let tiles = vec![
        TileType::with_sides("seed", &[(N, pad("b", 2)), (E, pad("a", 2))]),
        TileType::with_sides("tR", &[(W, pad("a", 2)), (N, pad("c", 2))]),
        TileType::with_sides("tU", &[(S, pad("b", 2)), (E, pad("c", 1))]),
        TileType::with_sides("tD", &[(S, pad("c", 2)), (W, pad("x", 1))]),
    ];
    Tas::new(tiles, 0).expect("mismatch variant is well formed")
}

/// Elbow variant in which the last of the three outer tiles always binds with
/// total strength 4.
pub fn overbind_variant() -> Tas {
    let tiles = vec![
        TileType::with_sides("seed", &[(N, pad("b", 2)), (E, pad("a", 2))]),
        TileType::with_sides("tR", &[(W, pad("a", 2)), (N, pad("e", 2))]),
        TileType::with_sides("tU", &[(S, pad("b", 2)), (E, pad("f", 2))]),
        TileType::with_sides("tX", &[(W, pad("f", 2)), (S, pad("e", 2))]),
    ];
    Tas::new(tiles, 0).expect("overbind variant is well formed")
}

/// Zig-zag binary counter over `width` bit columns, most significant bit at
/// `x = 0`.
///
/// Row 0 is the seed row holding 0. Odd rows grow east to west and add one,
/// even rows grow west to east and copy the row below, so rows `2k - 1` and
/// `2k` both hold `k`. The first tile of each row binds with a single
/// strength-2 glue from below; every other non-seed tile binds cooperatively
/// with two strength-1 glues. The counter halts when the increment overflows.
///
/// Glue labels: `c{x}_{v}` copy row to increment row, `u{x}_{v}` increment
/// row to copy row, `k{x}_{c}` carries, `p{x}` copy-row propagation and
/// `s{x}` the seed row.
pub fn counter(width: usize) -> Tas {
    assert!(width >= 1, "counter width must be positive");
    let last = width - 1;
    // vertical glue strengths: the glue that starts a row is strength 2
    let up_strength = |x: usize| if x == 0 { 2 } else { 1 };
    let copy_up_strength = |x: usize| if x == last { 2 } else { 1 };
    let mut tiles = Vec::new();

    let mut seed_sides = vec![(N, pad("c0_0", copy_up_strength(0)))];
    if width > 1 {
        seed_sides.push((E, pad("s1", 2)));
    }
    tiles.push(TileType::with_sides("seed", &seed_sides));
    for x in 1..width {
        let mut sides = vec![(W, pad(&format!("s{x}"), 2)), (N, pad(&format!("c{x}_0"), copy_up_strength(x)))];
        if x < last {
            sides.push((E, pad(&format!("s{}", x + 1), 2)));
        }
        tiles.push(TileType::with_sides(format!("seed{x}"), &sides));
    }

    // increment row
    for x in (0..width).rev() {
        let carries_in: &[u8] = if x == last { &[1] } else { &[0, 1] };
        for v in 0..2u8 {
            for &cin in carries_in {
                let bit = v ^ cin;
                let cout = v & cin;
                if x == 0 && cout == 1 {
                    continue;
                }
                let mut sides = vec![
                    (S, pad(&format!("c{x}_{v}"), copy_up_strength(x))),
                    (N, pad(&format!("u{x}_{bit}"), up_strength(x))),
                ];
                if x < last {
                    sides.push((E, pad(&format!("k{}_{cin}", x + 1), 1)));
                }
                if x > 0 {
                    sides.push((W, pad(&format!("k{x}_{cout}"), 1)));
                }
                let name = if x == last { format!("inc{x}_{v}") } else { format!("inc{x}_{v}c{cin}") };
                tiles.push(TileType::with_sides(name, &sides));
            }
        }
    }

    // copy row
    for x in 0..width {
        for v in 0..2u8 {
            let mut sides = vec![
                (S, pad(&format!("u{x}_{v}"), up_strength(x))),
                (N, pad(&format!("c{x}_{v}"), copy_up_strength(x))),
            ];
            if x > 0 {
                sides.push((W, pad(&format!("p{x}"), 1)));
            }
            if x < last {
                sides.push((E, pad(&format!("p{}", x + 1), 1)));
            }
            tiles.push(TileType::with_sides(format!("copy{x}_{v}"), &sides));
        }
    }
    Tas::new(tiles, 0).expect("counter is well formed")
}

/// Bits stored in row `y` of a counter assembly, most significant first;
/// `None` when the row is incomplete.
pub fn counter_row_value(tas: &Tas, assembly: &crate::atam::Assembly, width: usize, y: i64) -> Option<u64> {
    let mut value = 0u64;
    for x in 0..width as i64 {
        let tile = tas.tile(assembly.get(crate::atam::Pos::new(x, y))?).ok()?;
        // the bit is the trailing digit of the north glue label
        let bit = match tile.side(N).glue() {
            crate::atam::Glue::Label(l) => l.ends_with('1'),
            crate::atam::Glue::Null => return None,
        };
        value = (value << 1) | bit as u64;
    }
    Some(value)
}

/// Pascal-parity (Sierpinski) pattern on a `size` x `size` square.
///
/// Two strength-2 arms of `size` cells grow along the axes carrying bit 1;
/// interior tiles bind with strength-1 `h` (west) and `v` (south) glues and
/// output the XOR on their east and north sides.
pub fn sierpinski(size: usize) -> Tas {
    assert!(size >= 1, "sierpinski size must be positive");
    let mut tiles = Vec::new();
    let mut seed_sides = Vec::new();
    if size > 1 {
        seed_sides.push((E, pad("ax1", 2)));
        seed_sides.push((N, pad("ay1", 2)));
    }
    tiles.push(TileType::with_sides("seed", &seed_sides));
    for i in 1..size {
        let mut x_arm = vec![(W, pad(&format!("ax{i}"), 2)), (N, pad("v1", 1))];
        let mut y_arm = vec![(S, pad(&format!("ay{i}"), 2)), (E, pad("h1", 1))];
        if i + 1 < size {
            x_arm.push((E, pad(&format!("ax{}", i + 1), 2)));
            y_arm.push((N, pad(&format!("ay{}", i + 1), 2)));
        }
        tiles.push(TileType::with_sides(format!("x{i}"), &x_arm));
        tiles.push(TileType::with_sides(format!("y{i}"), &y_arm));
    }
    if size > 1 {
        for w in 0..2u8 {
            for s in 0..2u8 {
                let out = w ^ s;
                tiles.push(TileType::with_sides(
                    format!("xor{w}{s}"),
                    &[
                        (W, pad(&format!("h{w}"), 1)),
                        (S, pad(&format!("v{s}"), 1)),
                        (E, pad(&format!("h{out}"), 1)),
                        (N, pad(&format!("v{out}"), 1)),
                    ],
                ));
            }
        }
    }
    Tas::new(tiles, 0).expect("sierpinski is well formed")
}

/// Bit shown by the tile at a Sierpinski cell (arms and seed carry 1).
pub fn sierpinski_bit(tas: &Tas, tile: usize) -> Option<u8> {
    let t = tas.tile(tile).ok()?;
    if tile == tas.seed() {
        return Some(1);
    }
    match t.side(E).glue() {
        crate::atam::Glue::Label(l) if l.starts_with('h') => l[1..].parse().ok(),
        _ => match t.side(N).glue() {
            crate::atam::Glue::Label(l) if l.starts_with('v') => l[1..].parse().ok(),
            _ => Some(1),
        },
    }
}

/// Named corpus entries with their fixture file names and the exploration
/// bound at which they are documented to pass the local-consistency check.
pub fn catalog() -> Vec<(&'static str, Tas, usize)> {
    vec![
        ("elbow.tas", elbow(), 10),
        ("nondet_elbow.tas", nondet_elbow(), 10),
        ("counter3.tas", counter(3), 25),
        ("counter4.tas", counter(4), 25),
        ("sierpinski4.tas", sierpinski(4), 25),
        ("sierpinski8.tas", sierpinski(8), 12),
    ]
}

/// Fault-injected systems shipped alongside the corpus; both fail the
/// local-consistency check.
pub fn faulty_catalog() -> Vec<(&'static str, Tas)> {
    vec![("mismatch.tas", mismatch_variant()), ("overbind.tas", overbind_variant())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atam::{explore, sample_sequence, Pos};

    #[test]
    fn elbow_has_unique_terminal_of_size_four() {
        let tas = elbow();
        let ex = explore(&tas, 10);
        let terminals: Vec<_> = ex.sinks();
        assert_eq!(terminals.len(), 1);
        assert_eq!(ex.state(terminals[0]).len(), 4);
    }

    #[test]
    fn nondet_elbow_has_two_terminals() {
        let tas = nondet_elbow();
        let ex = explore(&tas, 10);
        assert_eq!(ex.sinks().len(), 2);
    }

    #[test]
    fn counter_rows_increment() {
        for width in 1..=4usize {
            let tas = counter(width);
            let seq = sample_sequence(&tas, 0, 10_000);
            let a = seq.replay(&tas).unwrap();
            let max = (1u64 << width) - 1;
            for k in 0..=max {
                assert_eq!(counter_row_value(&tas, &a, width, 2 * k as i64), Some(k));
                if k > 0 {
                    assert_eq!(counter_row_value(&tas, &a, width, 2 * k as i64 - 1), Some(k));
                }
            }
            // the overflowing increment row never completes
            assert_eq!(counter_row_value(&tas, &a, width, 2 * max as i64 + 1), None);
        }
    }

    fn pascal_parity(x: u64, y: u64) -> u8 {
        // C(x+y, x) mod 2 by Lucas: odd iff x & y == 0
        let mut c = vec![vec![0u8; (y + 1) as usize]; (x + 1) as usize];
        for i in 0..=x as usize {
            for j in 0..=y as usize {
                c[i][j] = if i == 0 || j == 0 { 1 } else { (c[i - 1][j] + c[i][j - 1]) % 2 };
            }
        }
        c[x as usize][y as usize]
    }

    #[test]
    fn sierpinski_matches_pascal_parity() {
        let tas = sierpinski(8);
        let seq = sample_sequence(&tas, 11, 1000);
        let a = seq.replay(&tas).unwrap();
        assert_eq!(a.len(), 64);
        for x in 0..8 {
            for y in 0..8 {
                let t = a.get(Pos::new(x, y)).unwrap();
                assert_eq!(sierpinski_bit(&tas, t), Some(pascal_parity(x as u64, y as u64)), "cell ({x},{y})");
            }
        }
    }
}
