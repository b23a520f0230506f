//! Row-oriented output as CSV, JSON or a TeX `tabular`.

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Tex,
}

/// A header and rows of already-rendered cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Tex => self.to_tex(None),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 cells")
    }

    /// An array of objects keyed by the header; every value is a string.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json");
        s.push('\n');
        s
    }

    /// A centred `tabular`; cells other than the first column are set in math mode.
    pub fn to_tex(&self, tex_header: Option<&[&str]>) -> String {
        let cols = self.header.len();
        let spec = vec!["c"; cols].join("|");
        let mut out = String::new();
        out.push_str("\\begin{table}[H]\n\\centerline{\n");
        out.push_str(&format!("\\begin{{tabular}}{{{spec}}}\n"));
        let head: Vec<String> = match tex_header {
            Some(h) => h.iter().map(|s| s.to_string()).collect(),
            None => self.header.clone(),
        };
        out.push_str(&head.join(" & "));
        out.push_str(" \\\\ \\hline\n");
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, c)| if i == 0 { c.clone() } else { format!("${c}$") })
                .collect();
            out.push_str(&cells.join(" & "));
            out.push_str(" \\\\\n");
        }
        out.push_str("\\hline\n\\end{tabular}\n}\n\\end{table}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["k", "value"]);
        t.push(vec!["1".into(), "2.5".into()]);
        t.push(vec!["2".into(), "1 + 2*sqrt(5)".into()]);
        t
    }

    #[test]
    fn csv_and_json() {
        let t = sample();
        assert_eq!(t.to_csv(), "k,value\n1,2.5\n2,1 + 2*sqrt(5)\n");
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[1]["value"], "1 + 2*sqrt(5)");
    }

    #[test]
    fn tex_rows() {
        let tex = sample().to_tex(None);
        assert!(tex.contains("k & value \\\\ \\hline"));
        assert!(tex.contains("1 & $2.5$ \\\\"));
    }
}
