use serde_json::Value;

use crate::Format;

/// One command's result in all three output formats.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub table: String,
    pub csv: String,
    pub json: Value,
    pub mismatch: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table.clone(),
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// CSV text with a leading `# tag` line.
pub struct CsvOut {
    w: csv::Writer<Vec<u8>>,
    tag: String,
}

impl CsvOut {
    pub fn new(tag: &str, header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        CsvOut { w, tag: tag.to_string() }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let body = String::from_utf8(self.w.into_inner().expect("flush")).expect("utf8");
        format!("# {}\n{}", self.tag, body)
    }
}
