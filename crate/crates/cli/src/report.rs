//! Output in two shapes: aligned text for people, `key=value` lines for tools.

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

pub struct Report {
    format: Format,
}

impl Report {
    pub fn new(format: Format) -> Self {
        Self { format }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// One record. Text mode prints one `key: value` line per field.
    pub fn record(&mut self, fields: &[(&str, String)]) {
        match self.format {
            Format::Structured => self.raw_record(&join(fields)),
            Format::Text => {
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in fields {
                    println!("{k:<width$}  {v}");
                }
            }
        }
    }

    /// A record that is already `key=value` text; printed as is in both modes.
    pub fn raw_record(&mut self, line: &str) {
        println!("{line}");
    }

    /// A table row: `text` in text mode, `fields` otherwise.
    pub fn row(&mut self, text: &str, fields: &[(&str, String)]) {
        match self.format {
            Format::Structured => self.raw_record(&join(fields)),
            Format::Text => println!("{text}"),
        }
    }

    /// Text-mode only.
    pub fn header(&mut self, text: &str) {
        if self.format == Format::Text {
            println!("{text}");
        }
    }

    /// Text-mode only; `text` may span lines.
    pub fn text(&mut self, text: &str) {
        if self.format == Format::Text {
            print!("{text}");
        }
    }

    pub fn warn(&mut self, msg: &str) {
        eprintln!("warning: {msg}");
    }
}

fn join(fields: &[(&str, String)]) -> String {
    fields
        .iter()
        .map(|(k, v)| format!("{k}={}", v.replace(' ', "_")))
        .collect::<Vec<_>>()
        .join(" ")
}
