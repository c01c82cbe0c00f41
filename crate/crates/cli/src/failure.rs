use dualsvd_core::Error;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Infeasible { residual: f64, threshold: f64 },
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Infeasible { .. } => 2,
            Self::Io(_) => 3,
        }
    }

    pub fn report(&self) {
        match self {
            Self::Usage(msg) => eprintln!("error: {msg}"),
            Self::Infeasible { residual, threshold } => {
                println!("existence residual: {residual}");
                eprintln!("error: no compact dual SVD exists (residual {residual:e} > threshold {threshold:e})");
            }
            Self::Io(msg) => eprintln!("error: {msg}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { residual, threshold } => Self::Infeasible { residual, threshold },
            Error::Io(_) | Error::Parse { .. } => Self::Io(e.to_string()),
            Error::DimensionMismatch { op: "container parts", .. } => Self::Io(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
