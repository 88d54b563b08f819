use std::fmt;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CAPACITY: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or parameters outside a routine's domain.
    Usage(String),
    Capacity(String),
    /// Numerical or I/O failure while running a valid request.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::Usage(_) | CliError::Runtime(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
            CliError::Capacity(m) => write!(f, "{m} (raise --dense-cap or use closed forms)"),
        }
    }
}

impl From<qmetro::Error> for CliError {
    fn from(e: qmetro::Error) -> Self {
        use qmetro::Error as E;
        match e {
            E::Capacity { .. } => CliError::Capacity(e.to_string()),
            E::NoConvergence | E::Numerical(_) => CliError::Runtime(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}
