//! Minimal CSV writer: 17 significant digits, `.` decimals, `\n` endings.

/// A float with 17 significant digits, so it parses back bit-exactly.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// `true`/`false`.
pub fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// An in-memory table written row by row.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self::start(Vec::new(), header)
    }

    /// A `# ...` line before the header.
    pub fn with_preamble(preamble: &str, header: &[&str]) -> Self {
        Self::start(format!("# {preamble}\n").into_bytes(), header)
    }

    fn start(buf: Vec<u8>, header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        writer.write_record(header).expect("writing to memory");
        Csv {
            writer,
            columns: header.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        assert_eq!(cells.len(), self.columns, "row width must match the header");
        self.writer
            .write_record(cells.iter().map(|c| c.as_ref()))
            .expect("writing to memory");
    }

    pub fn numbers(&mut self, xs: &[f64]) {
        let cells: Vec<String> = xs.iter().map(|&x| num(x)).collect();
        self.row(&cells);
    }

    pub fn into_string(self) -> String {
        let bytes = self.writer.into_inner().expect("flushing to memory");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }
}
