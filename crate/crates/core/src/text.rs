//! Stabilizer-circuit text format.
//!
//! One instruction per line, uppercase mnemonics, parenthesized numeric
//! arguments, `rec[-k]` measurement-record references. Consecutive
//! instructions of the same kind (and same noise argument) are coalesced
//! onto one line on output; multi-target lines are exploded back into
//! single-target instructions on input, so `parse(serialize(c)) == c`.
//!
//! Supported subset: `R`, `H`, `CX`, `M`, `MR`, `X_ERROR(p)`,
//! `DEPOLARIZE1(p)`, `DEPOLARIZE2(p)`, `TICK`, `QUBIT_COORDS`, `DETECTOR`,
//! `OBSERVABLE_INCLUDE(k)`.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};

fn flush(out: &mut String, pending: &mut Option<(String, Vec<String>)>) {
    if let Some((head, targets)) = pending.take() {
        out.push_str(&head);
        for t in targets {
            out.push(' ');
            out.push_str(&t);
        }
        out.push('\n');
    }
}

fn push(
    out: &mut String,
    pending: &mut Option<(String, Vec<String>)>,
    head: String,
    targets: Vec<String>,
) {
    match pending {
        Some((h, ts)) if *h == head => ts.extend(targets),
        _ => {
            flush(out, pending);
            *pending = Some((head, targets));
        }
    }
}

/// Render a circuit in the text format.
pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    let mut pending: Option<(String, Vec<String>)> = None;

    for ins in &circuit.instructions {
        match ins {
            Instruction::QubitCoords { qubit, x, y } => {
                flush(&mut out, &mut pending);
                let _ = writeln!(out, "QUBIT_COORDS({}, {}) {}", fmt_f(*x), fmt_f(*y), qubit);
            }
            Instruction::Reset { q } => push(&mut out, &mut pending, "R".into(), vec![q.to_string()]),
            Instruction::Hadamard { q } => {
                push(&mut out, &mut pending, "H".into(), vec![q.to_string()])
            }
            Instruction::Measure { q } => {
                push(&mut out, &mut pending, "M".into(), vec![q.to_string()])
            }
            Instruction::MeasureReset { q } => {
                push(&mut out, &mut pending, "MR".into(), vec![q.to_string()])
            }
            Instruction::ControlledX { control, target } => push(
                &mut out,
                &mut pending,
                "CX".into(),
                vec![control.to_string(), target.to_string()],
            ),
            Instruction::XError { p, q } => push(
                &mut out,
                &mut pending,
                format!("X_ERROR({})", fmt_f(*p)),
                vec![q.to_string()],
            ),
            Instruction::Depolarize1 { p, q } => push(
                &mut out,
                &mut pending,
                format!("DEPOLARIZE1({})", fmt_f(*p)),
                vec![q.to_string()],
            ),
            Instruction::Depolarize2 { p, a, b } => push(
                &mut out,
                &mut pending,
                format!("DEPOLARIZE2({})", fmt_f(*p)),
                vec![a.to_string(), b.to_string()],
            ),
            Instruction::Tick => {
                flush(&mut out, &mut pending);
                out.push_str("TICK\n");
            }
            Instruction::Detector { coord, offsets } => {
                flush(&mut out, &mut pending);
                match coord {
                    Some([x, y, t]) => {
                        let _ =
                            write!(out, "DETECTOR({}, {}, {})", fmt_f(*x), fmt_f(*y), fmt_f(*t));
                    }
                    None => out.push_str("DETECTOR"),
                }
                for k in offsets {
                    let _ = write!(out, " rec[-{k}]");
                }
                out.push('\n');
            }
            Instruction::ObservableInclude { id, offsets } => {
                flush(&mut out, &mut pending);
                let _ = write!(out, "OBSERVABLE_INCLUDE({id})");
                for k in offsets {
                    let _ = write!(out, " rec[-{k}]");
                }
                out.push('\n');
            }
        }
    }
    flush(&mut out, &mut pending);
    out
}

/// Shortest round-trip decimal form of a float.
fn fmt_f(v: f64) -> String {
    format!("{v}")
}

/// Parse a full circuit text. Inverse of [`serialize`] on the supported
/// subset; record references are validated against the running measurement
/// count.
pub fn parse(text: &str) -> Result<Circuit> {
    let mut instructions = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        instructions.extend(parse_line(line, lineno + 1)?);
    }
    Circuit::from_instructions(instructions)
}

/// Parse a single line into (possibly several single-target) instructions.
/// Grammar-level only: record references are not range-checked here.
pub fn parse_line(line: &str, lineno: usize) -> Result<Vec<Instruction>> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let line = line.trim();
    let name_end = line
        .find(|c: char| c == '(' || c.is_whitespace())
        .unwrap_or(line.len());
    let name = &line[..name_end];
    let (args, rest): (Vec<f64>, &str) = if line[name_end..].starts_with('(') {
        let close = line[name_end..]
            .find(')')
            .ok_or_else(|| err(format!("unbalanced parenthesis in {name:?} instruction")))?;
        let inner = &line[name_end + 1..name_end + close];
        let args = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| err(format!("malformed numeric argument {a:?}")))
                })
                .collect::<Result<_>>()?
        };
        (args, line[name_end + close + 1..].trim())
    } else {
        (Vec::new(), line[name_end..].trim())
    };

    let qubit_targets = |name: &str| -> Result<Vec<u32>> {
        rest.split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| err(format!("bad qubit target {t:?} for {name}")))
            })
            .collect()
    };
    let rec_targets = |name: &str| -> Result<Vec<u32>> {
        rest.split_whitespace()
            .map(|t| {
                t.strip_prefix("rec[-")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.parse::<u32>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| err(format!("bad record reference {t:?} for {name}")))
            })
            .collect()
    };
    let probability = |name: &str| -> Result<f64> {
        if args.len() != 1 {
            return Err(err(format!(
                "{name} takes exactly one probability argument, got {}",
                args.len()
            )));
        }
        let p = args[0];
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(err(format!("malformed probability {p} for {name}")));
        }
        Ok(p)
    };
    let no_args = |name: &str| -> Result<()> {
        if args.is_empty() {
            Ok(())
        } else {
            Err(err(format!("{name} takes no parenthesized arguments")))
        }
    };
    let pairs = |name: &str, targets: Vec<u32>| -> Result<Vec<(u32, u32)>> {
        if !targets.len().is_multiple_of(2) || targets.is_empty() {
            return Err(err(format!(
                "{name} needs an even, nonzero number of targets"
            )));
        }
        Ok(targets.chunks(2).map(|c| (c[0], c[1])).collect())
    };

    let out: Vec<Instruction> = match name {
        "R" => {
            no_args(name)?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::Reset { q })
                .collect()
        }
        "H" => {
            no_args(name)?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::Hadamard { q })
                .collect()
        }
        "M" => {
            no_args(name)?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::Measure { q })
                .collect()
        }
        "MR" => {
            no_args(name)?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::MeasureReset { q })
                .collect()
        }
        "CX" | "CNOT" => {
            no_args(name)?;
            pairs(name, qubit_targets(name)?)?
                .into_iter()
                .map(|(control, target)| Instruction::ControlledX { control, target })
                .collect()
        }
        // The paper-style "X-ERROR" spelling is accepted as an alias.
        "X_ERROR" | "X-ERROR" => {
            let p = probability("X_ERROR")?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::XError { p, q })
                .collect()
        }
        "DEPOLARIZE1" => {
            let p = probability(name)?;
            qubit_targets(name)?
                .into_iter()
                .map(|q| Instruction::Depolarize1 { p, q })
                .collect()
        }
        "DEPOLARIZE2" => {
            let p = probability(name)?;
            pairs(name, qubit_targets(name)?)?
                .into_iter()
                .map(|(a, b)| Instruction::Depolarize2 { p, a, b })
                .collect()
        }
        "TICK" => {
            no_args(name)?;
            if !rest.is_empty() {
                return Err(err("TICK takes no targets".into()));
            }
            vec![Instruction::Tick]
        }
        "QUBIT_COORDS" => {
            if args.len() != 2 {
                return Err(err(format!(
                    "QUBIT_COORDS takes two coordinate arguments, got {}",
                    args.len()
                )));
            }
            let targets = qubit_targets(name)?;
            if targets.len() != 1 {
                return Err(err("QUBIT_COORDS takes exactly one qubit target".into()));
            }
            vec![Instruction::QubitCoords {
                qubit: targets[0],
                x: args[0],
                y: args[1],
            }]
        }
        "DETECTOR" => {
            let coord = match args.len() {
                0 => None,
                3 => Some([args[0], args[1], args[2]]),
                n => {
                    return Err(err(format!(
                        "DETECTOR coordinate tag must have 0 or 3 components, got {n}"
                    )))
                }
            };
            let offsets = rec_targets(name)?;
            if offsets.is_empty() {
                return Err(err("DETECTOR needs at least one record reference".into()));
            }
            vec![Instruction::Detector { coord, offsets }]
        }
        "OBSERVABLE_INCLUDE" => {
            if args.len() != 1 || args[0].fract() != 0.0 || args[0] < 0.0 {
                return Err(err(
                    "OBSERVABLE_INCLUDE takes one non-negative integer index".into(),
                ));
            }
            vec![Instruction::ObservableInclude {
                id: args[0] as u32,
                offsets: rec_targets(name)?,
            }]
        }
        other => return Err(err(format!("unknown instruction {other:?}"))),
    };
    Ok(out)
}
