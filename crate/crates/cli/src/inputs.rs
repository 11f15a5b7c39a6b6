//! Input files are parsed once up front so the field (real or complex) can be
//! chosen before any typed object is built: one complex file makes the whole
//! computation complex.

use std::collections::HashMap;
use std::path::Path;

use linrel::io::{self, AnyMatrix, FormFile, RelationFile};
use linrel::scalar::{Field, Scalar, Tolerance};
use linrel::{DMatrix, Error, Form, Relation, Result, Subspace};

enum Raw {
    Matrix(AnyMatrix),
    Form(FormFile),
    Relation(RelationFile),
}

impl Raw {
    fn field(&self) -> Field {
        match self {
            Raw::Matrix(m) => m.field(),
            Raw::Form(f) => f.matrix.field(),
            Raw::Relation(r) => r.span.field(),
        }
    }
}

#[derive(Default)]
pub struct Inputs {
    files: HashMap<&'static str, Raw>,
}

fn missing(name: &str) -> Error {
    Error::InvalidArgument(format!("--{name} is required"))
}

impl Inputs {
    pub fn new() -> Self {
        Inputs::default()
    }

    pub fn matrix(mut self, name: &'static str, path: &Path) -> Result<Self> {
        let m = io::parse_matrix(&io::read_file(path)?)?;
        self.files.insert(name, Raw::Matrix(m));
        Ok(self)
    }

    pub fn form(mut self, name: &'static str, path: &Path) -> Result<Self> {
        let f = io::parse_form(&io::read_file(path)?)?;
        self.files.insert(name, Raw::Form(f));
        Ok(self)
    }

    pub fn relation(mut self, name: &'static str, path: &Path) -> Result<Self> {
        let r = io::parse_relation(&io::read_file(path)?)?;
        self.files.insert(name, Raw::Relation(r));
        Ok(self)
    }

    pub fn opt_matrix(self, name: &'static str, path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => self.matrix(name, p),
            None => Ok(self),
        }
    }

    pub fn opt_form(self, name: &'static str, path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => self.form(name, p),
            None => Ok(self),
        }
    }

    pub fn req_matrix(self, name: &'static str, path: Option<&Path>) -> Result<Self> {
        self.matrix(name, path.ok_or_else(|| missing(name))?)
    }

    pub fn req_form(self, name: &'static str, path: Option<&Path>) -> Result<Self> {
        self.form(name, path.ok_or_else(|| missing(name))?)
    }

    pub fn field(&self) -> Field {
        if self.files.values().any(|r| r.field() == Field::Complex) {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn has(&self, name: &str) -> bool {
        self.files.contains_key(name)
    }

    fn take(&mut self, name: &str) -> Result<Raw> {
        self.files.remove(name).ok_or_else(|| missing(name))
    }

    pub fn get_matrix<T: Scalar>(&mut self, name: &str) -> Result<DMatrix<T>> {
        match self.take(name)? {
            Raw::Matrix(m) => m.into_field(),
            _ => unreachable!("{name} was loaded as a matrix"),
        }
    }

    pub fn get_subspace<T: Scalar>(&mut self, name: &str, tol: Tolerance) -> Result<Subspace<T>> {
        Subspace::span(&self.get_matrix(name)?, tol)
    }

    pub fn get_form<T: Scalar>(&mut self, name: &str, tol: Tolerance) -> Result<Form<T>> {
        match self.take(name)? {
            Raw::Form(f) => f.build(tol),
            _ => unreachable!("{name} was loaded as a form"),
        }
    }

    pub fn get_relation<T: Scalar>(&mut self, name: &str, tol: Tolerance) -> Result<Relation<T>> {
        match self.take(name)? {
            Raw::Relation(r) => r.build(tol),
            _ => unreachable!("{name} was loaded as a relation"),
        }
    }

    /// Fails unless every input is real.
    pub fn require_real(&self, what: &str) -> Result<()> {
        if self.field() == Field::Complex {
            return Err(Error::InvalidArgument(format!("{what} is implemented for real inputs only")));
        }
        Ok(())
    }
}
