use std::io::Write;

use serde_json::{json, Value};

use crate::kernel::Universe;
use crate::stats::{enumerate_distributions, OccupancyVector, StatModel};

use super::{CliError, Format};

const OBJECTS: u64 = 3;
const BOXES: u64 = 2;

/// Row occupancies of the three figures, all taken from engine streams.
///
/// The first lists the BE states. The second is one sequence of eight
/// tuples allowed by the tuple-count axiom alone: the BE states followed by
/// the (1, 2) state repeated. The third is the MB tuples grouped by
/// occupancy, giving multiplicities 1, 3, 3, 1.
pub(crate) fn figures() -> Result<[Vec<OccupancyVector>; 3], CliError> {
    let u = Universe::builder().kind("a", OBJECTS as u32).build()?;
    let x = u.qset(u.micro_atoms().cloned())?;

    let be: Vec<OccupancyVector> = enumerate_distributions(&x, BOXES, StatModel::BE, u64::MAX)?
        .map(|d| d.occupancy())
        .collect();
    let mb: Vec<OccupancyVector> = enumerate_distributions(&x, BOXES, StatModel::MB, u64::MAX)?
        .map(|d| d.occupancy())
        .collect();

    let mut grouped = mb.clone();
    grouped.sort_by_key(|v| be.iter().position(|b| b == v));

    let mut sequence = be.clone();
    let repeated = be[2].clone();
    sequence.resize(mb.len(), repeated);

    Ok([be, sequence, grouped])
}

fn star_row(v: &OccupancyVector) -> String {
    let width = OBJECTS as usize;
    let cells: Vec<String> = v
        .entries()
        .iter()
        .map(|&k| format!("{:<width$}", "*".repeat(k as usize)))
        .collect();
    format!("|{}|", cells.join("|"))
}

const CAPTIONS: [&str; 3] = [
    "(1) the four distinguishable distributions of 3 objects over 2 boxes",
    "(2) one sequence of eight distributions allowed by the tuple count alone",
    "(3) the eight distributions once the multinomial weights are imposed",
];

pub(crate) fn run(format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let figs = figures()?;
    match format {
        Format::Table => {
            for (i, (caption, rows)) in CAPTIONS.iter().zip(&figs).enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "{caption}")?;
                let rule = format!(
                    "+{}+",
                    vec!["-".repeat(OBJECTS as usize); BOXES as usize].join("+")
                );
                writeln!(out, "{rule}")?;
                for v in rows {
                    writeln!(out, "{}", star_row(v))?;
                }
                writeln!(out, "{rule}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "figure,row,occupancy")?;
            for (f, rows) in figs.iter().enumerate() {
                for (r, v) in rows.iter().enumerate() {
                    writeln!(out, "{},{},{v}", f + 1, r + 1)?;
                }
            }
        }
        Format::Json => {
            let doc: Value = figs
                .iter()
                .map(|rows| {
                    json!(rows
                        .iter()
                        .map(|v| v.entries().to_vec())
                        .collect::<Vec<_>>())
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&json!({"figures": doc})).expect("json")
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(rows: &[OccupancyVector]) -> Vec<Vec<u64>> {
        rows.iter().map(|v| v.entries().to_vec()).collect()
    }

    #[test]
    fn figure_rows() {
        let [one, two, three] = figures().unwrap();
        assert_eq!(entries(&one), [[3, 0], [2, 1], [1, 2], [0, 3]]);
        assert_eq!(two.len(), 8);
        assert_eq!(three.len(), 8);
        assert_eq!(
            entries(&three),
            [
                [3, 0],
                [2, 1],
                [2, 1],
                [2, 1],
                [1, 2],
                [1, 2],
                [1, 2],
                [0, 3]
            ]
        );
        let mut a = entries(&two);
        let mut b = entries(&three);
        a.sort();
        b.sort();
        assert_ne!(a, b);
    }

    #[test]
    fn star_rows() {
        let v = OccupancyVector::new(vec![2, 1]).unwrap();
        assert_eq!(star_row(&v), "|** |*  |");
    }
}
