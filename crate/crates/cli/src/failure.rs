use ceqss_core::Error;
use serde::Serialize;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Machine-readable error printed on stdout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorObject {
    pub error: String,
    pub message: String,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub object: ErrorObject,
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Failure {
            exit: EXIT_INPUT,
            object: ErrorObject {
                error: code.into(),
                message: message.into(),
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            Error::Integrity(_) | Error::Invariant(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Failure {
            exit,
            object: ErrorObject {
                error: e.code().into(),
                message: e.to_string(),
            },
        }
    }
}
