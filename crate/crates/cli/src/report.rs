use std::fmt::Display;
use std::io::{self, Write};
use std::time::Duration;

/// Output of one command: ordered `key: value` lines plus optional tables.
///
/// In the default mode tables are flattened to one `name: col=value ...` line per row,
/// so every line stays `key: value`. With `--table` values are column-aligned and
/// tables get a header.
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<Item>,
}

#[derive(Debug)]
enum Item {
    Kv(String, String),
    Table { name: String, header: Vec<String>, rows: Vec<Vec<String>> },
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.kv("command", command);
        r
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push(Item::Kv(key.to_string(), value.to_string()));
        self
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        let header = header.iter().map(|h| h.to_string()).collect();
        self.entries.push(Item::Table { name: name.to_string(), header, rows });
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|e| match e {
            Item::Kv(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn write(&self, out: &mut dyn Write, human: bool, elapsed: Duration) -> io::Result<()> {
        let width = if human {
            self.entries.iter().filter_map(|e| if let Item::Kv(k, _) = e { Some(k.len()) } else { None }).max().unwrap_or(0)
        } else {
            0
        };
        for e in &self.entries {
            match e {
                Item::Kv(k, v) if human => writeln!(out, "{:<width$}  {v}", format!("{k}:"), width = width + 1)?,
                Item::Kv(k, v) => writeln!(out, "{k}: {v}")?,
                Item::Table { name, header, rows } if human => write_table(out, name, header, rows)?,
                Item::Table { name, header, rows } => {
                    for row in rows {
                        let cells: Vec<String> = header.iter().zip(row).map(|(h, c)| format!("{h}={c}")).collect();
                        writeln!(out, "{name}: {}", cells.join(" "))?;
                    }
                }
            }
        }
        writeln!(out, "duration_ms: {:.3}", elapsed.as_secs_f64() * 1e3)
    }
}

fn write_table(out: &mut dyn Write, name: &str, header: &[String], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    writeln!(out)?;
    writeln!(out, "{name}")?;
    writeln!(out, "{}", line(header))?;
    for row in rows {
        writeln!(out, "{}", line(row))?;
    }
    writeln!(out)
}

/// Shortest round-trip decimal, switching to exponent form for tiny or huge magnitudes.
#[derive(Clone, Copy, Debug)]
pub struct Num(pub f64);

impl Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}
