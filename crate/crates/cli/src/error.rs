use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration:\n{}", format_fields(.0))]
    Config(Vec<(String, String)>),

    #[error(transparent)]
    Model(#[from] skyrelay::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

fn format_fields(fields: &[(String, String)]) -> String {
    let mut out = String::new();
    for (i, (field, msg)) in fields.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("  {field}: {msg}"));
    }
    out
}

impl CliError {
    pub fn config(field: impl fmt::Display, message: impl fmt::Display) -> Self {
        CliError::Config(vec![(field.to_string(), message.to_string())])
    }

    /// 1 for bad input (including values the models reject), 3 for i/o.
    /// Verification failures are reported separately with 2.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Model(_) => 1,
            _ => 3,
        }
    }
}
