//! Line-oriented L-function spec files.
//!
//! ```text
//! [gamma]
//! q = 0.5641895835477563
//! lambda = 0.5
//! mu = 0 0
//! omega = 1 0
//! pole_order = 1
//!
//! [coefficients]
//! generator = zeta
//!
//! [overrides]
//! eps = 0.5
//! ```
//!
//! Complex numbers are written `re im`, lists are comma separated, and lines
//! starting with `#` are comments.

use std::fmt::{self, Write as _};
use std::path::Path;

use lseries_core::analytic::Builtin;
use lseries_core::coefficients::{BuiltinCharacter, CoefficientSource};
use lseries_core::fe::{FeError, GammaFactorData};
use lseries_core::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {field}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl SpecError {
    fn new(line: usize, field: &str, message: impl Into<String>) -> Self {
        Self {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Zeta,
    Dirichlet(BuiltinCharacter),
    Eigenform,
    Explicit {
        values: Vec<Complex64>,
        multiplicative: bool,
    },
    /// Never nests: lifting a lift multiplies the orders.
    Lift { base: Box<Generator>, k: u32 },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Zeta => "zeta",
            Generator::Dirichlet(_) => "dirichlet",
            Generator::Eigenform => "eigenform",
            Generator::Explicit { .. } => "explicit",
            Generator::Lift { .. } => "lift",
        }
    }

    pub fn lifted(&self, k: u32) -> Generator {
        match self {
            _ if k == 1 => self.clone(),
            Generator::Lift { base, k: j } => Generator::Lift {
                base: base.clone(),
                k: j * k,
            },
            other => Generator::Lift {
                base: Box::new(other.clone()),
                k,
            },
        }
    }

    pub fn source(&self) -> CoefficientSource {
        match self {
            Generator::Zeta => CoefficientSource::Zeta,
            Generator::Dirichlet(c) => CoefficientSource::dirichlet(*c),
            Generator::Eigenform => Builtin::Eigenform.source(),
            Generator::Explicit {
                values,
                multiplicative,
            } => CoefficientSource::explicit(values.clone(), *multiplicative),
            Generator::Lift { base, k } => CoefficientSource::Lift {
                base: Box::new(base.source()),
                k: *k,
            },
        }
    }

    /// The analytic evaluator, for the built-in functions.
    pub fn builtin(&self) -> Option<Builtin> {
        match self {
            Generator::Zeta => Some(Builtin::Zeta),
            Generator::Dirichlet(c) => Some(Builtin::Dirichlet(*c)),
            Generator::Eigenform => Some(Builtin::Eigenform),
            _ => None,
        }
    }

    pub fn lift_order(&self) -> u32 {
        match self {
            Generator::Lift { k, .. } => *k,
            _ => 1,
        }
    }
}

/// Optional numeric settings; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub c0: Option<f64>,
    /// Prime cutoff of the `P₁P₂P₃` split.
    pub cutoff: Option<f64>,
    /// Prime cutoff of the quotient split.
    pub t3_cutoff: Option<u64>,
    pub tolerance: Option<f64>,
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub gamma: GammaFactorData,
    pub generator: Generator,
    pub overrides: Overrides,
}

impl SpecFile {
    pub fn new(gamma: GammaFactorData, generator: Generator) -> Self {
        Self {
            gamma,
            generator,
            overrides: Overrides::default(),
        }
    }

    /// Spec of a built-in function with its own data.
    pub fn builtin(b: Builtin) -> Self {
        let generator = match b {
            Builtin::Zeta => Generator::Zeta,
            Builtin::Dirichlet(c) => Generator::Dirichlet(c),
            Builtin::Eigenform => Generator::Eigenform,
        };
        Self::new(b.gamma_data(), generator)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpecError::new(0, "file", format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn source(&self) -> CoefficientSource {
        self.generator.source()
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_c(z: Complex64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.gamma;
        let mut out = String::from("[gamma]\n");
        let _ = writeln!(out, "q = {}", fmt_f64(g.q()));
        let _ = writeln!(out, "lambda = {}", join(g.lambda(), |x| fmt_f64(*x)));
        let _ = writeln!(out, "mu = {}", join(g.mu(), |z| fmt_c(*z)));
        let _ = writeln!(out, "omega = {}", fmt_c(g.omega()));
        let _ = writeln!(out, "pole_order = {}", g.pole_order());
        out.push_str("\n[coefficients]\n");
        let _ = writeln!(out, "generator = {}", self.generator.name());
        let base = match &self.generator {
            Generator::Lift { base, k } => {
                let _ = writeln!(out, "k = {k}");
                let _ = writeln!(out, "base = {}", base.name());
                base.as_ref()
            }
            other => other,
        };
        match base {
            Generator::Dirichlet(c) => {
                let _ = writeln!(out, "character = {}", c.name());
            }
            Generator::Explicit {
                values,
                multiplicative,
            } => {
                let _ = writeln!(out, "values = {}", join(values, |z| fmt_c(*z)));
                let _ = writeln!(out, "multiplicative = {multiplicative}");
            }
            _ => {}
        }
        let o = &self.overrides;
        let mut rows = Vec::new();
        let mut real = |key: &str, v: Option<f64>| {
            if let Some(v) = v {
                rows.push(format!("{key} = {}", fmt_f64(v)));
            }
        };
        real("eps", o.eps);
        real("c0", o.c0);
        real("cutoff", o.cutoff);
        real("tolerance", o.tolerance);
        if let Some(v) = o.t3_cutoff {
            rows.push(format!("t3_cutoff = {v}"));
        }
        if let Some(v) = o.budget {
            rows.push(format!("budget = {v}"));
        }
        if !rows.is_empty() {
            out.push_str("\n[overrides]\n");
            for r in rows {
                out.push_str(&r);
                out.push('\n');
            }
        }
        f.write_str(&out)
    }
}

/// `(line, value)` of a key within a section.
type Entry = Option<(usize, String)>;

#[derive(Default)]
struct GammaKeys {
    q: Entry,
    lambda: Entry,
    mu: Entry,
    omega: Entry,
    pole_order: Entry,
}

#[derive(Default)]
struct CoefficientKeys {
    generator: Entry,
    character: Entry,
    base: Entry,
    k: Entry,
    values: Entry,
    multiplicative: Entry,
}

#[derive(Default)]
struct OverrideKeys {
    eps: Entry,
    c0: Entry,
    cutoff: Entry,
    t3_cutoff: Entry,
    tolerance: Entry,
    budget: Entry,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Gamma,
    Coefficients,
    Overrides,
}

fn parse_real(line: usize, field: &str, s: &str) -> Result<f64, SpecError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| SpecError::new(line, field, format!("'{}' is not a number", s.trim())))?;
    if !x.is_finite() {
        return Err(SpecError::new(line, field, "value must be finite"));
    }
    Ok(x)
}

fn parse_int<T: std::str::FromStr>(line: usize, field: &str, s: &str) -> Result<T, SpecError> {
    s.trim()
        .parse()
        .map_err(|_| SpecError::new(line, field, format!("'{}' is not a non-negative integer", s.trim())))
}

fn parse_complex(line: usize, field: &str, s: &str) -> Result<Complex64, SpecError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_real(line, field, re)?, 0.0)),
        [re, im] => Ok(Complex64::new(
            parse_real(line, field, re)?,
            parse_real(line, field, im)?,
        )),
        _ => Err(SpecError::new(
            line,
            field,
            format!("expected 're im', got '{}'", s.trim()),
        )),
    }
}

fn parse_list<T>(
    line: usize,
    field: &str,
    s: &str,
    item: impl Fn(usize, &str, &str) -> Result<T, SpecError>,
) -> Result<Vec<T>, SpecError> {
    if s.trim().is_empty() {
        return Err(SpecError::new(line, field, "list is empty"));
    }
    s.split(',')
        .enumerate()
        .map(|(i, part)| item(line, &format!("{field}[{i}]"), part))
        .collect()
}

fn parse_bool(line: usize, field: &str, s: &str) -> Result<bool, SpecError> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(SpecError::new(line, field, format!("'{other}' is not true or false"))),
    }
}

fn store(slot: &mut Entry, line: usize, key: &str, value: &str) -> Result<(), SpecError> {
    if let Some((first, _)) = slot {
        return Err(SpecError::new(line, key, format!("duplicate key, first set on line {first}")));
    }
    *slot = Some((line, value.to_string()));
    Ok(())
}

fn required<'a>(slot: &'a Entry, header: usize, section: &str, key: &str) -> Result<(usize, &'a str), SpecError> {
    slot.as_ref()
        .map(|(l, v)| (*l, v.as_str()))
        .ok_or_else(|| SpecError::new(header, key, format!("missing from [{section}]")))
}

fn gamma_error(e: FeError, keys: &GammaKeys, header: usize) -> SpecError {
    let line_of = |slot: &Entry| slot.as_ref().map_or(header, |(l, _)| *l);
    let (field, line) = match &e {
        FeError::NonPositiveQ(_) => ("q", line_of(&keys.q)),
        FeError::NoGammaFactors | FeError::NonPositiveLambda { .. } => ("lambda", line_of(&keys.lambda)),
        FeError::LengthMismatch { .. } | FeError::NonFiniteMu { .. } => ("mu", line_of(&keys.mu)),
        FeError::OmegaNotUnit(_) => ("omega", line_of(&keys.omega)),
        FeError::ZeroLiftOrder => ("k", header),
    };
    SpecError::new(line, field, e.to_string())
}

fn parse_base(
    name: (usize, &str),
    keys: &CoefficientKeys,
    header: usize,
) -> Result<Generator, SpecError> {
    let (line, name) = name;
    Ok(match name.trim() {
        "zeta" => Generator::Zeta,
        "eigenform" => Generator::Eigenform,
        "dirichlet" => {
            let (l, c) = required(&keys.character, header, "coefficients", "character")?;
            let c = BuiltinCharacter::from_name(c.trim()).ok_or_else(|| {
                let known: Vec<&str> = BuiltinCharacter::ALL.iter().map(|c| c.name()).collect();
                SpecError::new(l, "character", format!("unknown character '{}', expected one of {}", c.trim(), known.join(", ")))
            })?;
            Generator::Dirichlet(c)
        }
        "explicit" => {
            let (l, v) = required(&keys.values, header, "coefficients", "values")?;
            let values = parse_list(l, "values", v, parse_complex)?;
            let multiplicative = match &keys.multiplicative {
                Some((l, v)) => parse_bool(*l, "multiplicative", v)?,
                None => false,
            };
            Generator::Explicit {
                values,
                multiplicative,
            }
        }
        other => {
            return Err(SpecError::new(
                line,
                "generator",
                format!("unknown generator '{other}', expected zeta, dirichlet, eigenform, explicit or lift"),
            ))
        }
    })
}

impl std::str::FromStr for SpecFile {
    type Err = SpecError;

    fn from_str(text: &str) -> Result<Self, SpecError> {
        let mut gamma = GammaKeys::default();
        let mut coeffs = CoefficientKeys::default();
        let mut over = OverrideKeys::default();
        let mut headers: [Option<usize>; 3] = [None; 3];
        let mut section: Option<Section> = None;
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last = line;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(name) = t.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| SpecError::new(line, "section", format!("unterminated header '{t}'")))?
                    .trim();
                let s = match name {
                    "gamma" => Section::Gamma,
                    "coefficients" => Section::Coefficients,
                    "overrides" => Section::Overrides,
                    other => return Err(SpecError::new(line, "section", format!("unknown section [{other}]"))),
                };
                let slot = &mut headers[s as usize];
                if let Some(first) = slot {
                    return Err(SpecError::new(line, name, format!("duplicate section, first on line {first}")));
                }
                *slot = Some(line);
                section = Some(s);
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| SpecError::new(line, "line", format!("expected 'key = value', got '{t}'")))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(SpecError::new(line, "key", "empty key before '='"));
            }
            let slot = match section {
                None => return Err(SpecError::new(line, key, "key outside of any section")),
                Some(Section::Gamma) => match key {
                    "q" => &mut gamma.q,
                    "lambda" => &mut gamma.lambda,
                    "mu" => &mut gamma.mu,
                    "omega" => &mut gamma.omega,
                    "pole_order" => &mut gamma.pole_order,
                    _ => return Err(SpecError::new(line, key, "unknown key in [gamma]")),
                },
                Some(Section::Coefficients) => match key {
                    "generator" => &mut coeffs.generator,
                    "character" => &mut coeffs.character,
                    "base" => &mut coeffs.base,
                    "k" => &mut coeffs.k,
                    "values" => &mut coeffs.values,
                    "multiplicative" => &mut coeffs.multiplicative,
                    _ => return Err(SpecError::new(line, key, "unknown key in [coefficients]")),
                },
                Some(Section::Overrides) => match key {
                    "eps" => &mut over.eps,
                    "c0" => &mut over.c0,
                    "cutoff" => &mut over.cutoff,
                    "t3_cutoff" => &mut over.t3_cutoff,
                    "tolerance" => &mut over.tolerance,
                    "budget" => &mut over.budget,
                    _ => return Err(SpecError::new(line, key, "unknown key in [overrides]")),
                },
            };
            store(slot, line, key, value)?;
        }
        let end = last + 1;

        let gh = headers[Section::Gamma as usize]
            .ok_or_else(|| SpecError::new(end, "gamma", "missing [gamma] section"))?;
        let (l, q) = required(&gamma.q, gh, "gamma", "q")?;
        let q = parse_real(l, "q", q)?;
        let (l, v) = required(&gamma.lambda, gh, "gamma", "lambda")?;
        let lambda = parse_list(l, "lambda", v, parse_real)?;
        let (l, v) = required(&gamma.mu, gh, "gamma", "mu")?;
        let mu = parse_list(l, "mu", v, parse_complex)?;
        let omega = match &gamma.omega {
            Some((l, v)) => parse_complex(*l, "omega", v)?,
            None => Complex64::new(1.0, 0.0),
        };
        let pole_order = match &gamma.pole_order {
            Some((l, v)) => parse_int(*l, "pole_order", v)?,
            None => 0,
        };
        let data = GammaFactorData::new(q, lambda, mu, omega, pole_order)
            .map_err(|e| gamma_error(e, &gamma, gh))?;

        let ch = headers[Section::Coefficients as usize]
            .ok_or_else(|| SpecError::new(end, "coefficients", "missing [coefficients] section"))?;
        let (gl, gname) = required(&coeffs.generator, ch, "coefficients", "generator")?;
        let generator = if gname.trim() == "lift" {
            let (l, k) = required(&coeffs.k, ch, "coefficients", "k")?;
            let k: u32 = parse_int(l, "k", k)?;
            if k == 0 {
                return Err(SpecError::new(l, "k", "lift order must be at least 1"));
            }
            let (bl, b) = required(&coeffs.base, ch, "coefficients", "base")?;
            if b.trim() == "lift" {
                return Err(SpecError::new(bl, "base", "a lift base cannot itself be a lift"));
            }
            let base = parse_base((bl, b), &coeffs, ch)?;
            Generator::Lift {
                base: Box::new(base),
                k,
            }
        } else {
            for (slot, key) in [(&coeffs.k, "k"), (&coeffs.base, "base")] {
                if let Some((l, _)) = slot {
                    return Err(SpecError::new(*l, key, "only valid with generator = lift"));
                }
            }
            parse_base((gl, gname), &coeffs, ch)?
        };

        let real = |slot: &Entry, key: &str| -> Result<Option<f64>, SpecError> {
            slot.as_ref().map(|(l, v)| parse_real(*l, key, v)).transpose()
        };
        let overrides = Overrides {
            eps: real(&over.eps, "eps")?,
            c0: real(&over.c0, "c0")?,
            cutoff: real(&over.cutoff, "cutoff")?,
            tolerance: real(&over.tolerance, "tolerance")?,
            t3_cutoff: over
                .t3_cutoff
                .as_ref()
                .map(|(l, v)| parse_int(*l, "t3_cutoff", v))
                .transpose()?,
            budget: over
                .budget
                .as_ref()
                .map(|(l, v)| parse_int(*l, "budget", v))
                .transpose()?,
        };
        Ok(SpecFile {
            gamma: data,
            generator,
            overrides,
        })
    }
}
