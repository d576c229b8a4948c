use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use evoca_core::reference;
use evoca_core::PerformanceReport;

use crate::manifest::{read_file, write_file};

#[derive(clap::Args)]
pub struct Args {
    /// CSV written by `evaluate`.
    #[arg(long)]
    csv: PathBuf,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let table = render(&read_file(&args.csv)?)?;
    match &args.out {
        Some(path) => write_file(path, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

/// Aligned table of the CSV rows with published values and deltas where the
/// rule is a known one.
pub fn render(csv: &str) -> Result<String> {
    let mut lines = csv.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut out = String::new();
    writeln!(
        out,
        "{:<32}  {:<20}  {:<7}  {:>7}  {:>7}  {:>7}  {:>7}",
        "rule", "name", "task", "n_cells", "p_hat", "paper", "delta"
    )?;
    match lines.next() {
        None => return Ok(out),
        Some((_, header)) if header.trim() == PerformanceReport::CSV_HEADER => {}
        Some((i, header)) => bail!("line {}: unexpected header {header:?}", i + 1),
    }
    for (i, line) in lines {
        let row = PerformanceReport::from_csv_row(line, i + 1)?;
        let known = reference::lookup(row.rule);
        let paper = known.and_then(|r| r.value(row.task.kind, row.task.n_cells));
        let (paper_col, delta_col) = match paper {
            Some(p) => (format!("{p:.3}"), format!("{:+.3}", row.p_hat - p)),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{:<32}  {:<20}  {:<7}  {:>7}  {:>7.3}  {:>7}  {:>7}",
            row.rule.to_hex(),
            known.map_or("", |r| r.label()),
            row.task.kind.name(),
            row.task.n_cells,
            row.p_hat,
            paper_col,
            delta_col
        )?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "rule_hex,task,n_cells,t_max,distribution,samples,correct,p_hat,master_seed";

    #[test]
    fn das_delta() {
        let csv = format!(
            "{HEADER}\n000F730F001FFF0F000FFF0F001FFF1F,density,149,320,unbiased,1000,821,0.821000,1\n"
        );
        let table = render(&csv).unwrap();
        let row = table.lines().nth(1).unwrap();
        assert!(row.contains("Das"), "{row}");
        assert!(row.contains("0.823"), "{row}");
        assert!(row.trim_end().ends_with("-0.002"), "{row}");
    }

    #[test]
    fn unknown_rule_has_no_reference() {
        let csv = format!("{HEADER}\n{},or,149,320,unbiased,10,5,0.500000,1\n", "0".repeat(32));
        let table = render(&csv).unwrap();
        let row = table.lines().nth(1).unwrap();
        assert!(row.trim_end().ends_with("0.500"), "{row}");
    }

    #[test]
    fn empty_and_malformed() {
        assert_eq!(render("").unwrap().lines().count(), 1);
        assert_eq!(render(&format!("{HEADER}\n")).unwrap().lines().count(), 1);
        let err = render(&format!("{HEADER}\nfoo,bar\n")).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(render("a,b,c\n").is_err());
    }
}
