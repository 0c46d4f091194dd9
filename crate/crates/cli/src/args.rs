//! Minimal flag parser: `--name value` pairs plus positional words, with
//! typed accessors that turn bad input into usage errors.

use std::collections::BTreeMap;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Default)]
pub struct ParsedArgs {
    pub positionals: Vec<String>,
    flags: BTreeMap<String, String>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl ParsedArgs {
    pub fn parse(args: &[String]) -> CliResult<Self> {
        let mut positionals = Vec::new();
        let mut flags = BTreeMap::new();
        let mut it = args.iter().peekable();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                if name.is_empty() {
                    return Err(CliError::usage("stray `--`"));
                }
                let (key, value) = match name.split_once('=') {
                    Some((k, v)) => (k.to_string(), v.to_string()),
                    None => {
                        let value = it
                            .next()
                            .ok_or_else(|| CliError::usage(format!("--{name} needs a value")))?;
                        (name.to_string(), value.clone())
                    }
                };
                if flags.insert(key.clone(), value).is_some() {
                    return Err(CliError::usage(format!("--{key} given twice")));
                }
            } else {
                positionals.push(arg.clone());
            }
        }
        Ok(Self {
            positionals,
            flags,
            consumed: Default::default(),
        })
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        let v = self.flags.get(name).map(|s| s.as_str());
        if v.is_some() {
            self.consumed.borrow_mut().push(name.to_string());
        }
        v
    }

    pub fn get_f64(&self, name: &str) -> CliResult<Option<f64>> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => parse_f64(raw)
                .map(Some)
                .map_err(|e| CliError::usage(format!("--{name}: {e}"))),
        }
    }

    pub fn get_u64(&self, name: &str) -> CliResult<Option<u64>> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => {
                // Accept scientific notation for big integers (e.g. 1e6).
                if raw.contains(['e', 'E', '.']) {
                    let v =
                        parse_f64(raw).map_err(|e| CliError::usage(format!("--{name}: {e}")))?;
                    if v < 0.0 || v > u64::MAX as f64 || v.fract() != 0.0 {
                        return Err(CliError::usage(format!("--{name}: {raw} is not a u64")));
                    }
                    Ok(Some(v as u64))
                } else {
                    raw.parse::<u64>()
                        .map(Some)
                        .map_err(|_| CliError::usage(format!("--{name}: {raw} is not a u64")))
                }
            }
        }
    }

    pub fn get_u32(&self, name: &str) -> CliResult<Option<u32>> {
        match self.get_u64(name)? {
            None => Ok(None),
            Some(v) => u32::try_from(v)
                .map(Some)
                .map_err(|_| CliError::usage(format!("--{name}: {v} exceeds u32"))),
        }
    }

    pub fn require_f64(&self, name: &str) -> CliResult<f64> {
        self.get_f64(name)?
            .ok_or_else(|| CliError::usage(format!("missing required --{name}")))
    }

    pub fn require_u32(&self, name: &str) -> CliResult<u32> {
        self.get_u32(name)?
            .ok_or_else(|| CliError::usage(format!("missing required --{name}")))
    }

    pub fn require_u64(&self, name: &str) -> CliResult<u64> {
        self.get_u64(name)?
            .ok_or_else(|| CliError::usage(format!("missing required --{name}")))
    }

    /// Errors on any flag never consumed by a `get*` call.
    pub fn reject_unknown(&self) -> CliResult<()> {
        let consumed = self.consumed.borrow();
        for key in self.flags.keys() {
            if !consumed.iter().any(|c| c == key) {
                return Err(CliError::usage(format!("unknown flag --{key}")));
            }
        }
        Ok(())
    }
}

/// Accepts plain floats plus `2^n` power notation.
pub fn parse_f64(raw: &str) -> Result<f64, String> {
    if let Some(exp) = raw.strip_prefix("2^") {
        let e: f64 = exp.parse().map_err(|_| format!("{raw} is not a number"))?;
        return Ok(e.exp2());
    }
    raw.parse::<f64>()
        .map_err(|_| format!("{raw} is not a number"))
}
