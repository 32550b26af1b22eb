//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tasbench::atam::{explore, sample_sequence, Assembly, Direction, Glue, Pos, Tas};
use tasbench::consistency::verify_locally_consistent;
use tasbench::corpus;
use tasbench::encode::{
    address_of, bin_pad, compile, decode_pad, BitString, CompileParams, CompiledSystem, GlueOrdering, Pad, PAIR_ORDER,
};
use tasbench::lookup::{direct_lookup, mod_select, trace_lookup};
use tasbench::macrosim::{r_star, MacroSim};
use tasbench::svg::render_svg;
use tasbench::verify::full_report;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compiled(tas: &Tas) -> CompiledSystem {
    compile(tas, &CompileParams::default()).expect("corpus system compiles")
}

fn corpus_systems() -> Vec<(&'static str, Tas)> {
    corpus::catalog().into_iter().map(|(name, tas, _)| (name, tas)).collect()
}

// Pad bits written out directly: glue index, direction, strength.
fn oracle_bits(index: usize, width: usize, d: Direction, strength: u8) -> String {
    let dir = match d {
        Direction::N => "00",
        Direction::E => "01",
        Direction::S => "10",
        Direction::W => "11",
    };
    format!("{index:0width$b}{dir}{}", if strength == 2 { 1 } else { 0 })
}

// ceil(log2(|G| + 1)) where |G| counts the labels and the null glue.
fn oracle_width(labels: usize) -> usize {
    let g = labels + 1;
    (0..).find(|w| (1usize << w) > g).unwrap()
}

fn pad_codec() -> Outcome {
    let mut checked = 0;
    for labels in 1..=8usize {
        let names: Vec<String> = (0..labels).map(|i| format!("g{i}")).collect();
        let ord = GlueOrdering::from_labels(names.clone());
        let width = oracle_width(labels);
        ensure(ord.width() == width, || format!("width {} for {labels} labels, expected {width}", ord.width()))?;
        for (i, name) in names.iter().enumerate() {
            for d in Direction::ALL {
                for s in 1..=2u8 {
                    let pad = Pad::new(Glue::label(name.clone()), d, s).unwrap();
                    let bits = bin_pad(&pad, &ord).map_err(|e| e.to_string())?;
                    ensure(bits.len() == width + 3, || format!("{pad}: length {}", bits.len()))?;
                    ensure(bits.to_string() == oracle_bits(i + 1, width, d, s), || format!("{pad}: bits {bits}"))?;
                    let back = decode_pad(&bits, &ord).map_err(|e| e.to_string())?;
                    ensure(back == pad, || format!("{pad} decodes to {back}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} pads"))
}

fn address_canon() -> Outcome {
    let expected = ["EN", "SE", "WS", "NW", "NS", "EW"];
    let order: Vec<String> = PAIR_ORDER.iter().map(|(a, b)| format!("{}{}", a.letter(), b.letter())).collect();
    ensure(order == expected, || format!("pair order {order:?}"))?;
    let mut checked = 0;
    for (_, tas) in corpus_systems() {
        let ord = tasbench::encode::glue_ordering(&tas);
        let glues: Vec<Glue> = ord.glues().iter().filter(|g| !g.is_null()).cloned().collect();
        let index = |g: &Glue| ord.glues().iter().position(|h| h == g).unwrap();
        let w = ord.width();
        for g in &glues {
            for d in Direction::ALL {
                let a = address_of(&[Pad::new(g.clone(), d, 2).unwrap()], &ord).map_err(|e| e.to_string())?;
                let want = format!("{}{}", "0".repeat(w + 3), oracle_bits(index(g), w, d, 2));
                ensure(a.bits().to_string() == want, || format!("single {g}/{d}: {}", a.bits()))?;
                checked += 1;
            }
        }
        for pair in expected {
            let mut letters = pair.chars().map(|c| Direction::from_letter(c).unwrap());
            let (first, second) = (letters.next().unwrap(), letters.next().unwrap());
            for g in &glues {
                for h in &glues {
                    let p = Pad::new(g.clone(), first, 1).unwrap();
                    let q = Pad::new(h.clone(), second, 1).unwrap();
                    let want = format!("{}{}", oracle_bits(index(g), w, first, 1), oracle_bits(index(h), w, second, 1));
                    for pads in [[p.clone(), q.clone()], [q.clone(), p.clone()]] {
                        let a = address_of(&pads, &ord).map_err(|e| e.to_string())?;
                        ensure(a.bits().to_string() == want, || format!("{pair} {g},{h}: {}", a.bits()))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} addresses"))
}

fn table_structure() -> Outcome {
    for (name, tas) in corpus_systems() {
        let cs = compiled(&tas);
        let rev: String = cs.w.chars().rev().collect();
        let want = format!(">{}<%%>{rev}<", cs.w);
        ensure(cs.table.strip_blanks() == want, || format!("{name}: de-spliced table differs"))?;
        let rendered: Vec<char> = cs.table.render().chars().collect();
        for (i, c) in rendered.iter().enumerate() {
            ensure((*c == '_') == (i % 2 == 1), || format!("{name}: blank mismatch at {i}"))?;
        }
        let max = *cs.addresses.keys().max().unwrap();
        let hashes = cs.w.matches('#').count() as u64;
        ensure(hashes == max + 1, || format!("{name}: {hashes} entries, max address {max}"))?;
    }
    Ok(format!("{} systems", corpus::catalog().len()))
}

fn lookup_equivalence() -> Outcome {
    let mut total = 0;
    let mut addrs = 0;
    for (_, tas) in corpus_systems() {
        let cs = compiled(&tas);
        for (&addr, e) in &cs.addresses {
            let n = e.tiles.len() as u64;
            // the parser's answer depends only on the sub-entry
            let oracle = (0..n)
                .map(|q| direct_lookup(&cs.w, &cs.glues, addr, q).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            for len in 1..=6usize {
                for v in 0..(1u64 << len) {
                    let b = BitString::from_value(v, len);
                    let (sel, trace) = trace_lookup(&cs.table, &cs.glues, addr, &b, false)
                        .map_err(|e| format!("addr {addr} b {b}: {e}"))?;
                    let p = v % n;
                    ensure(trace.n == n && trace.p == Some(p), || format!("addr {addr} b {b}: n/p"))?;
                    let q = n - 1 - p;
                    ensure(sel.sub_entry == oracle[q as usize] && sel.selected_index == q, || {
                        format!("addr {addr} b {b}: trace and parser disagree")
                    })?;
                    total += 1;
                }
            }
            addrs += 1;
        }
    }
    Ok(format!("{total} lookups over {addrs} addresses"))
}

fn fairness() -> Outcome {
    let mut entries = 0;
    for (name, tas) in corpus_systems() {
        let cs = compiled(&tas);
        for e in cs.addresses.values() {
            let n = e.tiles.len() as u64;
            for len in 1..=8usize {
                let total = 1u64 << len;
                let mut counts = vec![0u64; n as usize];
                for v in 0..total {
                    counts[mod_select(&BitString::from_value(v, len), n).unwrap() as usize] += 1;
                }
                let (lo, hi) = (total / n, total.div_ceil(n));
                ensure(counts.iter().all(|&c| c >= lo && c <= hi), || format!("{name}: counts {counts:?} for n={n}"))?;
            }
            entries += 1;
        }
    }
    let cs = compiled(&corpus::nondet_elbow());
    let mut counts = BTreeMap::new();
    for v in 0..16 {
        let (sel, _) =
            trace_lookup(&cs.table, &cs.glues, 1948, &BitString::from_value(v, 4), false).map_err(|e| e.to_string())?;
        *counts.entry(sel.selected_index).or_insert(0) += 1;
    }
    ensure(counts.values().copied().collect::<Vec<_>>() == vec![8, 8], || format!("nondet split {counts:?}"))?;
    Ok(format!("{entries} entries, nondet split 8/8"))
}

fn local_consistency() -> Outcome {
    let good = [
        ("elbow", corpus::elbow()),
        ("nondet_elbow", corpus::nondet_elbow()),
        ("counter4", corpus::counter(4)),
        ("sierpinski4", corpus::sierpinski(4)),
    ];
    for (name, tas) in good {
        let r = verify_locally_consistent(&tas, 25);
        ensure(r.passed(), || format!("{name} rejected: {}", r.verdict.witness().unwrap()))?;
    }
    for (name, tas) in corpus::faulty_catalog() {
        let r = verify_locally_consistent(&tas, 25);
        let w = r.verdict.witness().ok_or_else(|| format!("{name} accepted"))?;
        ensure(!w.replay(&tas).passed(), || format!("{name}: witness does not replay"))?;
    }
    Ok("4 accepted, 2 rejected with replayable witnesses".into())
}

fn simulation_conditions() -> Outcome {
    let cases = [
        ("elbow", corpus::elbow(), 6, false),
        ("nondet_elbow", corpus::nondet_elbow(), 6, false),
        ("counter4", corpus::counter(4), 15, true),
    ];
    let mut notes = Vec::new();
    for (name, tas, bound, truncated) in cases {
        let cs = compiled(&tas);
        let r = full_report(&cs, bound);
        ensure(r.passed(), || format!("{name}:\n{}", r.to_text()))?;
        ensure(r.source_truncated == truncated && r.macro_truncated == truncated, || {
            format!("{name}: truncation flags {} {}", r.source_truncated, r.macro_truncated)
        })?;
        if name == "elbow" {
            ensure(r.coverage.exact, || "elbow coverage not exact".into())?;
        }
        notes.push(format!("{name}@{bound} {} macro states", r.coverage.macro_states));
    }
    Ok(notes.join(", "))
}

fn nondeterminism_fidelity() -> Outcome {
    let cs = compiled(&corpus::nondet_elbow());
    let sim = MacroSim::new(&cs);
    let ex = sim.explore(10).map_err(|e| e.to_string())?;
    ensure(!ex.is_truncated(), || "macro exploration truncated".into())?;
    let mut decoded = BTreeSet::new();
    for i in ex.sinks() {
        decoded.insert(r_star(ex.state(i), &cs).map_err(|e| e.to_string())?);
    }
    let src = explore(&cs.source, 10);
    let expected: BTreeSet<Assembly> = src.sinks().into_iter().map(|i| src.state(i).clone()).collect();
    ensure(expected.len() == 2, || format!("{} source terminals", expected.len()))?;
    ensure(decoded == expected, || format!("{} decoded terminals", decoded.len()))?;
    Ok("2 terminal assemblies, no others".into())
}

fn determinism() -> Outcome {
    let tas = corpus::counter(3);
    ensure(sample_sequence(&tas, 5, 100) == sample_sequence(&tas, 5, 100), || "sample_sequence differs".into())?;
    let a = compiled(&corpus::nondet_elbow());
    let b = compiled(&corpus::nondet_elbow());
    ensure(a.to_text() == b.to_text(), || "compiled artifacts differ".into())?;
    let run1 = MacroSim::new(&a).simulate(7, 10).map_err(|e| e.to_string())?;
    let run2 = MacroSim::new(&b).simulate(7, 10).map_err(|e| e.to_string())?;
    ensure(run1.transitions == run2.transitions && run1.assembly == run2.assembly, || "macro runs differ".into())?;
    let img = r_star(&run1.assembly, &a).map_err(|e| e.to_string())?;
    ensure(render_svg(&a.source, &img, 40) == render_svg(&b.source, &img, 40), || "svg differs".into())?;
    Ok(format!("{} macro events replayed", run1.transitions.len()))
}

fn counter_semantics() -> Outcome {
    let cs = compiled(&corpus::counter(3));
    let run = MacroSim::new(&cs).simulate(3, 1000).map_err(|e| e.to_string())?;
    let image = r_star(&run.assembly, &cs).map_err(|e| e.to_string())?;
    for k in 0..=7i64 {
        let expected = k as u64;
        let rows: Vec<i64> = if k == 0 { vec![0] } else { vec![2 * k - 1, 2 * k] };
        for y in rows {
            let got = corpus::counter_row_value(&cs.source, &image, 3, y);
            ensure(got == Some(expected), || format!("row {y}: {got:?}, expected {expected}"))?;
        }
    }
    ensure(image.get(Pos::new(0, 15)).is_none(), || "overflow row completed".into())?;
    Ok(format!("rows 0..=14 from {} blocks", image.len()))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("pad codec round trip", pad_codec, 1),
        ("address canonical order", address_canon, 1),
        ("table structure", table_structure, 1),
        ("lookup oracle equivalence", lookup_equivalence, 10),
        ("selection fairness", fairness, 1),
        ("local consistency classifier", local_consistency, 5),
        ("simulation conditions", simulation_conditions, 60),
        ("nondeterminism fidelity", nondeterminism_fidelity, 10),
        ("determinism and replay", determinism, 5),
        ("counter semantics", counter_semantics, 5),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let status = match (&outcome, over) {
            (Ok(_), false) => "PASS",
            _ => "FAIL",
        };
        let detail = match &outcome {
            Ok(d) if over => format!("{d}; exceeded {limit}s"),
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {:>2} {status} {name} ({:.2}s, limit {limit}s): {detail}", i + 1, elapsed.as_secs_f64());
        if status == "FAIL" {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all criteria passed");
        ExitCode::SUCCESS
    }
}
