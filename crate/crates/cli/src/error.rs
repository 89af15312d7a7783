use std::fmt;
use std::io;

use capitula_core::pell::PellError;
use capitula_core::Error;
use serde::Serialize;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Rejected input; `code` is stable for scripts.
    Input { code: &'static str, message: String },
    Internal { code: &'static str, message: String },
    Io(io::Error),
}

#[derive(Serialize)]
struct Payload<'a> {
    error: Body<'a>,
}

#[derive(Serialize)]
struct Body<'a> {
    code: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Internal { .. } => EXIT_INTERNAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input { code, .. } | CliError::Internal { code, .. } => code,
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        let message = match self {
            CliError::Input { message, .. } | CliError::Internal { message, .. } => message.clone(),
            CliError::Io(e) => e.to_string(),
        };
        serde_json::to_string(&Payload {
            error: Body {
                code: self.code(),
                message,
                exit_code: self.exit_code(),
            },
        })
        .expect("error payload serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { message, .. } | CliError::Internal { message, .. } => {
                f.write_str(message)
            }
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Internal {
                code: "serialization",
                message: format!("{other:?}"),
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match &e {
            Error::Pair(p) => CliError::Input {
                code: p.code(),
                message,
            },
            Error::Pell(PellError::RadicandTooSmall(_)) => CliError::Input {
                code: "radicand_too_small",
                message,
            },
            Error::Pell(PellError::NotSquarefree(_)) => CliError::Input {
                code: "not_squarefree",
                message,
            },
            Error::Pell(PellError::PeriodCapExceeded { .. }) => CliError::Input {
                code: "period_cap_exceeded",
                message,
            },
            Error::Undecided { .. } => CliError::Internal {
                code: "undecided",
                message,
            },
            _ => CliError::Internal {
                code: "inconsistent",
                message,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
