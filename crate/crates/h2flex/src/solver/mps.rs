//! Fixed-layout MPS interchange: NAME / ROWS / COLUMNS / RHS / BOUNDS /
//! ENDATA, in that order, with 12-significant-digit numbers.
//!
//! Rows are named `R<i>`, columns `C<j>`, the objective row `COST`. Values
//! that are representable in 12 significant decimal digits survive a
//! write/parse round trip bit-exactly; everything else is reproduced to
//! within one unit of the 12th digit.

use super::problem::{ColTag, LpError, LpProblem, RowSense, RowTag};
use std::io::{BufRead, Write};
use std::path::Path;

fn fmt_value(v: f64) -> String {
    format!("{v:.11E}")
}

/// Writes the problem in MPS form to `out`.
pub fn write_interchange<W: Write>(problem: &LpProblem, name: &str, out: &mut W) -> Result<(), LpError> {
    problem.check()?;
    writeln!(out, "NAME          {name}")?;
    writeln!(out, "ROWS")?;
    writeln!(out, " N  COST")?;
    for i in 0..problem.n_rows {
        let sense = match problem.row_sense[i] {
            RowSense::Le => 'L',
            RowSense::Eq => 'E',
            RowSense::Ge => 'G',
        };
        writeln!(out, " {sense}  R{i}")?;
    }

    // Column-major entry order; objective coefficient leads each column.
    let mut by_col: Vec<Vec<(String, f64)>> = vec![Vec::new(); problem.n_cols];
    for (j, col) in by_col.iter_mut().enumerate() {
        let c = problem.objective[j];
        if c != 0.0 {
            col.push(("COST".to_string(), c));
        }
    }
    let mut entries = problem.entries.clone();
    entries.sort_unstable_by_key(|&(r, c, _)| (c, r));
    for (r, c, v) in entries {
        by_col[c as usize].push((format!("R{r}"), v));
    }
    // A column absent from COLUMNS would not exist for the reader; pin empty
    // columns with an explicit zero objective coefficient.
    for col in by_col.iter_mut() {
        if col.is_empty() {
            col.push(("COST".to_string(), 0.0));
        }
    }

    writeln!(out, "COLUMNS")?;
    for (j, col) in by_col.iter().enumerate() {
        for pair in col.chunks(2) {
            let mut line = format!("    {:<10}{:<10}{:<20}", format!("C{j}"), pair[0].0, fmt_value(pair[0].1));
            if let Some(second) = pair.get(1) {
                line.push_str(&format!("{:<10}{:<20}", second.0, fmt_value(second.1)));
            }
            writeln!(out, "{}", line.trim_end())?;
        }
    }

    writeln!(out, "RHS")?;
    let nonzero_rhs: Vec<(usize, f64)> =
        problem.rhs.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, &v)| (i, v)).collect();
    for pair in nonzero_rhs.chunks(2) {
        let mut line = format!("    {:<10}{:<10}{:<20}", "RHS", format!("R{}", pair[0].0), fmt_value(pair[0].1));
        if let Some(second) = pair.get(1) {
            line.push_str(&format!("{:<10}{:<20}", format!("R{}", second.0), fmt_value(second.1)));
        }
        writeln!(out, "{}", line.trim_end())?;
    }

    writeln!(out, "BOUNDS")?;
    for j in 0..problem.n_cols {
        let (l, u) = (problem.col_lower[j], problem.col_upper[j]);
        let name = format!("C{j}");
        if l == u {
            writeln!(out, " FX {:<10}{:<10}{}", "BND", name, fmt_value(l))?;
        } else if l.is_infinite() && u.is_infinite() {
            writeln!(out, " FR {:<10}{:<10}", "BND", name)?;
        } else {
            if l.is_infinite() {
                writeln!(out, " MI {:<10}{:<10}", "BND", name)?;
            } else if l != 0.0 {
                writeln!(out, " LO {:<10}{:<10}{}", "BND", name, fmt_value(l))?;
            }
            if u.is_finite() {
                writeln!(out, " UP {:<10}{:<10}{}", "BND", name, fmt_value(u))?;
            }
        }
    }
    writeln!(out, "ENDATA")?;
    Ok(())
}

/// Writes the problem to a file path.
pub fn write_interchange_file<P: AsRef<Path>>(problem: &LpProblem, name: &str, path: P) -> Result<(), LpError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_interchange(problem, name, &mut file)
}

#[derive(Copy, Clone, PartialEq)]
enum Section {
    Start,
    Rows,
    Columns,
    Rhs,
    Bounds,
    Done,
}

/// Parses a problem written by [`write_interchange`] (or any MPS file using
/// the same sections). Row and column order follows first appearance.
pub fn read_interchange<R: BufRead>(input: R) -> Result<LpProblem, LpError> {
    use std::collections::HashMap;

    let mut section = Section::Start;
    let mut objective_row: Option<String> = None;
    let mut row_names: HashMap<String, usize> = HashMap::new();
    let mut senses: Vec<RowSense> = Vec::new();
    let mut col_names: HashMap<String, usize> = HashMap::new();
    let mut objective: Vec<f64> = Vec::new();
    let mut lower: Vec<f64> = Vec::new();
    let mut upper: Vec<f64> = Vec::new();
    let mut entries: Vec<(u32, u32, f64)> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();

    let parse_num = |tok: &str, line_no: usize| -> Result<f64, LpError> {
        tok.parse::<f64>().map_err(|_| LpError::Parse { line: line_no, message: format!("bad number `{tok}`") })
    };

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        let is_header = !line.starts_with(' ');
        if is_header {
            let mut tokens = line.split_whitespace();
            let keyword = tokens.next().unwrap_or("");
            section = match keyword {
                "NAME" => Section::Start,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => {
                    return Err(LpError::Parse { line: line_no, message: "RANGES sections are not supported".into() })
                }
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Done,
                other => {
                    return Err(LpError::Parse { line: line_no, message: format!("unknown section `{other}`") })
                }
            };
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(LpError::Parse { line: line_no, message: "expected `<sense> <name>`".into() });
                }
                match tokens[0] {
                    "N" => {
                        if objective_row.is_some() {
                            return Err(LpError::Parse { line: line_no, message: "multiple objective rows".into() });
                        }
                        objective_row = Some(tokens[1].to_string());
                    }
                    s => {
                        let sense = match s {
                            "L" => RowSense::Le,
                            "G" => RowSense::Ge,
                            "E" => RowSense::Eq,
                            other => {
                                return Err(LpError::Parse { line: line_no, message: format!("bad row sense `{other}`") })
                            }
                        };
                        if row_names.insert(tokens[1].to_string(), senses.len()).is_some() {
                            return Err(LpError::Parse { line: line_no, message: format!("duplicate row `{}`", tokens[1]) });
                        }
                        senses.push(sense);
                        rhs.push(0.0);
                    }
                }
            }
            Section::Columns => {
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(LpError::Parse { line: line_no, message: "expected `<col> (<row> <value>)+`".into() });
                }
                let col = *col_names.entry(tokens[0].to_string()).or_insert_with(|| {
                    objective.push(0.0);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    objective.len() - 1
                });
                for pair in tokens[1..].chunks(2) {
                    let value = parse_num(pair[1], line_no)?;
                    if Some(pair[0]) == objective_row.as_deref() {
                        objective[col] = value;
                    } else {
                        let row = *row_names.get(pair[0]).ok_or_else(|| LpError::Parse {
                            line: line_no,
                            message: format!("unknown row `{}`", pair[0]),
                        })?;
                        entries.push((row as u32, col as u32, value));
                    }
                }
            }
            Section::Rhs => {
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(LpError::Parse { line: line_no, message: "expected `<set> (<row> <value>)+`".into() });
                }
                for pair in tokens[1..].chunks(2) {
                    if Some(pair[0]) == objective_row.as_deref() {
                        continue; // objective offsets are not used
                    }
                    let row = *row_names.get(pair[0]).ok_or_else(|| LpError::Parse {
                        line: line_no,
                        message: format!("unknown row `{}`", pair[0]),
                    })?;
                    rhs[row] = parse_num(pair[1], line_no)?;
                }
            }
            Section::Bounds => {
                let kind = tokens[0];
                let needs_value = matches!(kind, "UP" | "LO" | "FX");
                let expected = if needs_value { 4 } else { 3 };
                if tokens.len() != expected {
                    return Err(LpError::Parse { line: line_no, message: format!("bad `{kind}` bound line") });
                }
                let col = *col_names.get(tokens[2]).ok_or_else(|| LpError::Parse {
                    line: line_no,
                    message: format!("unknown column `{}`", tokens[2]),
                })?;
                match kind {
                    "UP" => upper[col] = parse_num(tokens[3], line_no)?,
                    "LO" => lower[col] = parse_num(tokens[3], line_no)?,
                    "FX" => {
                        let v = parse_num(tokens[3], line_no)?;
                        lower[col] = v;
                        upper[col] = v;
                    }
                    "FR" => {
                        lower[col] = f64::NEG_INFINITY;
                        upper[col] = f64::INFINITY;
                    }
                    "MI" => lower[col] = f64::NEG_INFINITY,
                    "PL" => upper[col] = f64::INFINITY,
                    other => {
                        return Err(LpError::Parse { line: line_no, message: format!("unsupported bound kind `{other}`") })
                    }
                }
            }
            Section::Start | Section::Done => {
                return Err(LpError::Parse { line: line_no, message: "data outside of a section".into() })
            }
        }
    }
    if section != Section::Done {
        return Err(LpError::Parse { line: 0, message: "missing ENDATA".into() });
    }

    let n_cols = objective.len();
    let n_rows = senses.len();
    let problem = LpProblem {
        n_cols,
        n_rows,
        col_lower: lower,
        col_upper: upper,
        objective,
        row_sense: senses,
        rhs,
        entries,
        row_tags: vec![RowTag::Other; n_rows],
        col_tags: vec![ColTag::Other; n_cols],
    };
    problem.check()?;
    Ok(problem)
}

/// Reads a problem from a file path.
pub fn read_interchange_file<P: AsRef<Path>>(path: P) -> Result<LpProblem, LpError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    read_interchange(file)
}
