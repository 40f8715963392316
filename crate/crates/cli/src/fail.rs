use std::fmt;
use std::process::ExitCode;

/// Process exit status of a failed command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Usage = 1,
    Data = 2,
    Verification = 3,
}

#[derive(Debug)]
pub struct Fail {
    pub code: Code,
    pub error: anyhow::Error,
}

impl Fail {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Fail {
            code: Code::Usage,
            error: error.into(),
        }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        Fail {
            code: Code::Data,
            error: error.into(),
        }
    }

    pub fn verification(msg: impl fmt::Display) -> Self {
        Fail {
            code: Code::Verification,
            error: anyhow::anyhow!("{msg}"),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code as u8)
    }
}

impl From<hashembed::Error> for Fail {
    fn from(e: hashembed::Error) -> Self {
        use hashembed::Error as E;
        match e {
            E::InvalidDimensionality(_) | E::InvalidWindow { .. } => Fail::usage(e),
            _ => Fail::data(e),
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CmdResult<T = ()> = Result<T, Fail>;
