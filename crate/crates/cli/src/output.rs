use std::fmt;

use clap::ValueEnum;
use serde_json::Value;

use dkl_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Ascii,
    Json,
}

/// What a command produced. `ok` is false when a checked invariant failed.
pub struct Outcome {
    pub text: String,
    pub ascii: Option<String>,
    pub json: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Outcome {
            text: text.into(),
            ascii: None,
            json,
            ok: true,
        }
    }

    pub fn with_ascii(mut self, ascii: impl Into<String>) -> Self {
        self.ascii = Some(ascii.into());
        self
    }

    pub fn failed_if(mut self, bad: bool) -> Self {
        self.ok &= !bad;
        self
    }

    pub fn render(&self, format: Format) -> String {
        let body = match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Format::Ascii => self.ascii.clone().unwrap_or_else(|| self.text.clone()),
            Format::Text => self.text.clone(),
        };
        body.trim_end().to_string()
    }
}

/// A usage or input error; the process exits with status 2.
#[derive(Debug)]
pub struct UsageError {
    pub message: String,
    /// The offending argument with a caret under the bad character.
    pub pointer: Option<(String, usize)>,
}

impl UsageError {
    pub fn new(message: impl Into<String>) -> Self {
        UsageError {
            message: message.into(),
            pointer: None,
        }
    }

    fn at(message: String, shown: String, column: usize) -> Self {
        UsageError {
            message,
            pointer: Some((shown, column)),
        }
    }

    /// Attaches a caret to errors that carry a position inside `input`.
    pub fn from_input(flag: &str, input: &str, err: Error) -> Self {
        let shown = format!("{flag} {input}");
        let prefix = flag.chars().count() + 1;
        match &err {
            Error::InvalidSign { position, .. } => UsageError::at(err.to_string(), shown, prefix + position - 1),
            Error::InvalidWord { position, .. } => {
                let column = token_column(input, *position).unwrap_or(0);
                UsageError::at(err.to_string(), shown, prefix + column)
            }
            _ => UsageError::new(format!("{flag}: {err}")),
        }
    }
}

/// Character offset of the `k`-th (1-based) comma separated token.
fn token_column(input: &str, k: usize) -> Option<usize> {
    let mut token = 1;
    let mut at_start = true;
    for (col, c) in input.chars().enumerate() {
        if c == ',' {
            token += 1;
            at_start = true;
            continue;
        }
        if at_start && !c.is_whitespace() {
            if token == k {
                return Some(col);
            }
            at_start = false;
        }
    }
    None
}

impl From<Error> for UsageError {
    fn from(err: Error) -> Self {
        UsageError::new(err.to_string())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)?;
        if let Some((shown, column)) = &self.pointer {
            write!(f, "\n  {shown}\n  {}^", " ".repeat(*column))?;
        }
        Ok(())
    }
}
