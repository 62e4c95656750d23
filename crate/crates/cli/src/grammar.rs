//! Text syntax for function and measure specs.
//!
//! ```text
//! spec  := name '(' [arg {',' arg}] ')'
//! arg   := key '=' (number | list)
//! list  := '[' [pair {',' pair}] ']'
//! pair  := '(' number ',' number ')'
//! ```

use dunklkit::spec::{Atom, DensitySpec, FunctionSpec, MeasureSpec, NamedFunction, SpectralProfile};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected {}, found {}", self.offset, self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Pairs(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
struct Arg {
    key: String,
    key_at: usize,
    value: Value,
    value_at: usize,
}

/// A parsed spec: either a function of x or a measure on [0, ∞).
#[derive(Debug, Clone)]
pub enum Parsed {
    Function { spec: FunctionSpec, k: Option<f64> },
    Measure(MeasureSpec),
}

impl Parsed {
    /// The function the checks act on; a measure μ becomes x ↦ ∫E_k(−x, t)dμ(t).
    pub fn into_function(self) -> FunctionSpec {
        match self {
            Parsed::Function { spec, .. } => spec,
            Parsed::Measure(m) => FunctionSpec::LaplaceDunkl(m),
        }
    }

    pub fn k(&self) -> Option<f64> {
        match self {
            Parsed::Function { k, .. } => *k,
            Parsed::Measure(_) => None,
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

const NAMES: &[&str] = &["kernel", "gauss", "atom-measure", "density-measure", "raw-table", "kernel-square", "vk-gauss", "psi", "phi-paper", "profile"];

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, SyntaxError> {
        Err(SyntaxError { offset: self.pos, expected: expected.iter().map(|s| s.to_string()).collect(), found: self.found() })
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str, dash: bool) -> Result<(String, usize), SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() || c == '_' => {}
            _ => return self.fail(&[what]),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || (dash && c == '-') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn number(&mut self) -> Result<f64, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let digits_from = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i == digits_from || !self.src[digits_from..i].bytes().any(|b| b.is_ascii_digit()) {
            return self.fail(&["number"]);
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_digits = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_digits {
                i = j;
            }
        }
        match self.src[start..i].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = i;
                Ok(v)
            }
            _ => self.fail(&["number"]),
        }
    }

    fn value(&mut self) -> Result<Value, SyntaxError> {
        self.skip_ws();
        if self.peek() != Some('[') {
            return match self.number() {
                Ok(v) => Ok(Value::Number(v)),
                Err(_) => self.fail(&["number", "'['"]),
            };
        }
        self.pos += 1;
        let mut pairs = Vec::new();
        if self.eat(']') {
            return Ok(Value::Pairs(pairs));
        }
        loop {
            self.expect('(')?;
            let a = self.number()?;
            self.expect(',')?;
            let b = self.number()?;
            self.expect(')')?;
            pairs.push((a, b));
            if self.eat(']') {
                return Ok(Value::Pairs(pairs));
            }
            if !self.eat(',') {
                return self.fail(&["','", "']'"]);
            }
        }
    }
}

fn semantic<T>(offset: usize, expected: &str, found: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { offset, expected: vec![expected.to_string()], found: found.into() })
}

struct Args {
    args: Vec<Arg>,
    end: usize,
}

impl Args {
    fn number(&self, key: &str) -> Result<Option<f64>, SyntaxError> {
        match self.args.iter().find(|a| a.key == key) {
            None => Ok(None),
            Some(Arg { value: Value::Number(v), .. }) => Ok(Some(*v)),
            Some(a) => semantic(a.value_at, "number", "list"),
        }
    }

    fn required(&self, name: &str, key: &str) -> Result<f64, SyntaxError> {
        self.number(key)?.map_or_else(|| semantic(self.end, &format!("argument '{key}' for {name}"), "')'"), Ok)
    }

    fn pairs(&self, name: &str, key: &str) -> Result<Vec<(f64, f64)>, SyntaxError> {
        match self.args.iter().find(|a| a.key == key) {
            None => semantic(self.end, &format!("argument '{key}' for {name}"), "')'"),
            Some(Arg { value: Value::Pairs(p), .. }) => Ok(p.clone()),
            Some(a) => semantic(a.value_at, "list of pairs", "number"),
        }
    }

    fn only(&self, keys: &[&str]) -> Result<(), SyntaxError> {
        for (i, a) in self.args.iter().enumerate() {
            if !keys.contains(&a.key.as_str()) {
                return semantic(a.key_at, &format!("one of {}", keys.join(", ")), format!("'{}'", a.key));
            }
            if self.args[..i].iter().any(|b| b.key == a.key) {
                return semantic(a.key_at, "a key not given before", format!("'{}'", a.key));
            }
        }
        Ok(())
    }
}

/// Parses a spec, reporting the byte offset and expected tokens on failure.
pub fn parse_spec(text: &str) -> Result<Parsed, SyntaxError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let (name, name_at) = lx.ident("function name", true)?;
    lx.expect('(')?;
    let mut args = Vec::new();
    if !lx.eat(')') {
        loop {
            let (key, key_at) = lx.ident("key", false)?;
            lx.expect('=')?;
            lx.skip_ws();
            let value_at = lx.pos;
            let value = lx.value()?;
            args.push(Arg { key, key_at, value, value_at });
            if lx.eat(')') {
                break;
            }
            if !lx.eat(',') {
                return lx.fail(&["','", "')'"]);
            }
        }
    }
    let end = lx.pos.saturating_sub(1);
    lx.skip_ws();
    if lx.pos != text.len() {
        return lx.fail(&["end of input"]);
    }
    let a = Args { args, end };
    let function = |spec: FunctionSpec| Parsed::Function { spec, k: None };
    let parsed = match name.as_str() {
        "kernel" => {
            a.only(&["k", "y"])?;
            Parsed::Function { spec: FunctionSpec::KernelDecaying { y: a.required("kernel", "y")? }, k: a.number("k")? }
        }
        "gauss" => {
            a.only(&["p"])?;
            function(FunctionSpec::Gaussian { p: a.required("gauss", "p")? })
        }
        "kernel-square" => {
            a.only(&["t"])?;
            function(FunctionSpec::Named(NamedFunction::KernelOfSquare { t: a.required("kernel-square", "t")? }))
        }
        "vk-gauss" => {
            a.only(&["t"])?;
            function(FunctionSpec::Named(NamedFunction::IntertwinedGaussian { t: a.required("vk-gauss", "t")? }))
        }
        "psi" => {
            a.only(&["p"])?;
            function(FunctionSpec::Named(NamedFunction::KummerPsi { p: a.required("psi", "p")? }))
        }
        "phi-paper" => {
            a.only(&["p"])?;
            function(FunctionSpec::Named(NamedFunction::KummerPhiPaper { p: a.required("phi-paper", "p")? }))
        }
        "profile" => {
            a.only(&["a", "b"])?;
            function(FunctionSpec::FromTransform(SpectralProfile::ExpQuadratic { a: a.number("a")?.unwrap_or(0.0), b: a.required("profile", "b")? }))
        }
        "raw-table" => {
            a.only(&["points"])?;
            function(FunctionSpec::Table(a.pairs("raw-table", "points")?))
        }
        "atom-measure" => {
            a.only(&["atoms"])?;
            Parsed::Measure(MeasureSpec { atoms: a.pairs("atom-measure", "atoms")?.into_iter().map(|(t, w)| Atom { t, w }).collect(), density: None })
        }
        "density-measure" => {
            a.only(&["p", "rho", "scale"])?;
            Parsed::Measure(MeasureSpec {
                atoms: Vec::new(),
                density: Some(DensitySpec {
                    p: a.required("density-measure", "p")?,
                    rho: a.number("rho")?.unwrap_or(0.0),
                    scale: a.number("scale")?.unwrap_or(1.0),
                }),
            })
        }
        _ => return semantic(name_at, &format!("one of {}", NAMES.join(", ")), format!("'{name}'")),
    };
    Ok(parsed)
}

fn pairs_text(p: &[(f64, f64)]) -> String {
    let items: Vec<String> = p.iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!("[{}]", items.join(","))
}

/// Canonical text: fixed key order, defaults spelled out, shortest round-trip numbers.
pub fn canonical(parsed: &Parsed) -> Option<String> {
    Some(match parsed {
        Parsed::Function { spec, k } => match spec {
            FunctionSpec::KernelDecaying { y } => match k {
                Some(k) => format!("kernel(k={k}, y={y})"),
                None => format!("kernel(y={y})"),
            },
            FunctionSpec::Gaussian { p } => format!("gauss(p={p})"),
            FunctionSpec::Named(NamedFunction::KernelOfSquare { t }) => format!("kernel-square(t={t})"),
            FunctionSpec::Named(NamedFunction::IntertwinedGaussian { t }) => format!("vk-gauss(t={t})"),
            FunctionSpec::Named(NamedFunction::KummerPsi { p }) => format!("psi(p={p})"),
            FunctionSpec::Named(NamedFunction::KummerPhiPaper { p }) => format!("phi-paper(p={p})"),
            FunctionSpec::FromTransform(SpectralProfile::ExpQuadratic { a, b }) => format!("profile(a={a}, b={b})"),
            FunctionSpec::Table(points) => format!("raw-table(points={})", pairs_text(points)),
            _ => return None,
        },
        Parsed::Measure(m) => match (&m.density, m.atoms.is_empty()) {
            (Some(d), true) => format!("density-measure(p={}, rho={}, scale={})", d.p, d.rho, d.scale),
            (None, _) => format!("atom-measure(atoms={})", pairs_text(&m.atoms.iter().map(|a| (a.t, a.w)).collect::<Vec<_>>())),
            _ => return None,
        },
    })
}
