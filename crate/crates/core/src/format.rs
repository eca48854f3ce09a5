//! Text formats for algebras, modules and pointed simplicial sets.
//!
//! ```text
//! algebra dim=2 field=gfp:101
//! unit 1 0
//! mul 0 0 1 0
//! mul 0 1 0 1
//! mul 1 0 0 1
//! module dim=1
//! act 0 0 1
//! ```
//!
//! Products and actions that are not listed are zero. Blank lines and
//! lines starting with `#` are skipped.
//!
//! ```text
//! simplicial max_level=1
//! level 0 size=1
//! level 1 size=2
//! face 1 0: 0 0
//! face 1 1: 0 0
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::algebra::{CommutativeAlgebra, SymmetricBimodule};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::loday::{FinitePointedSimplicialSet, PointedMap};

type Entries = BTreeMap<(usize, usize), (usize, Vec<String>)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleText {
    pub dim: usize,
    line: usize,
    act: Entries,
}

/// A parsed algebra file; values stay textual until a field is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraText {
    pub dim: usize,
    pub field: FieldDescriptor,
    unit: (usize, Vec<String>),
    mul: Entries,
    pub module: Option<ModuleText>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn key_value<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=…`, found `{token}`")))
}

fn number(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::parse(line, format!("bad {what} `{token}`")))
}

fn entry(line: usize, words: &[&str], bounds: (usize, usize), width: usize, entries: &mut Entries, kind: &str) -> Result<()> {
    if words.len() != 2 + width {
        return Err(Error::parse(line, format!("`{kind} i j` takes {width} values, found {}", words.len().saturating_sub(2))));
    }
    let i = number(line, words[0], "index")?;
    let j = number(line, words[1], "index")?;
    if i >= bounds.0 || j >= bounds.1 {
        return Err(Error::parse(line, format!("index out of range in `{kind} {i} {j}`")));
    }
    let values = words[2..].iter().map(|s| s.to_string()).collect();
    if let Some((first, _)) = entries.insert((i, j), (line, values)) {
        return Err(Error::parse(line, format!("`{kind} {i} {j}` already given on line {first}")));
    }
    Ok(())
}

fn parse_module_lines<'a>(
    header: (usize, &str),
    rest: impl Iterator<Item = (usize, &'a str)>,
    alg_dim: usize,
) -> Result<ModuleText> {
    let (line, text) = header;
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() != 2 || words[0] != "module" {
        return Err(Error::parse(line, "expected `module dim=<m>`"));
    }
    let dim = number(line, key_value(line, words[1], "dim")?, "dimension")?;
    if dim == 0 {
        return Err(Error::parse(line, "module dimension must be positive"));
    }
    let mut act = Entries::new();
    for (l, text) in rest {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words[0] {
            "act" => entry(l, &words[1..], (alg_dim, dim), dim, &mut act, "act")?,
            other => return Err(Error::parse(l, format!("unexpected `{other}` in module section"))),
        }
    }
    Ok(ModuleText { dim, line, act })
}

impl AlgebraText {
    pub fn parse(text: &str) -> Result<Self> {
        let all: Vec<(usize, &str)> = lines(text).collect();
        let Some(&(line, header)) = all.first() else {
            return Err(Error::parse(1, "empty algebra file"));
        };
        let words: Vec<&str> = header.split_whitespace().collect();
        if words.len() != 3 || words[0] != "algebra" {
            return Err(Error::parse(line, "expected `algebra dim=<n> field=<gfp:P|rational>`"));
        }
        let dim = number(line, key_value(line, words[1], "dim")?, "dimension")?;
        if dim == 0 {
            return Err(Error::parse(line, "algebra dimension must be positive"));
        }
        let field: FieldDescriptor = key_value(line, words[2], "field")?
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let split = all.iter().position(|(_, l)| l.starts_with("module")).unwrap_or(all.len());
        let mut unit = None;
        let mut mul = Entries::new();
        for &(l, text) in &all[1..split] {
            let words: Vec<&str> = text.split_whitespace().collect();
            match words[0] {
                "unit" => {
                    if unit.is_some() {
                        return Err(Error::parse(l, "unit given twice"));
                    }
                    if words.len() != dim + 1 {
                        return Err(Error::parse(l, format!("unit takes {dim} values")));
                    }
                    unit = Some((l, words[1..].iter().map(|s| s.to_string()).collect()));
                }
                "mul" => entry(l, &words[1..], (dim, dim), dim, &mut mul, "mul")?,
                other => return Err(Error::parse(l, format!("unexpected `{other}`"))),
            }
        }
        let unit = unit.ok_or_else(|| Error::parse(line, "missing `unit` line"))?;
        let module = if split < all.len() {
            Some(parse_module_lines(all[split], all[split + 1..].iter().copied(), dim)?)
        } else {
            None
        };
        Ok(AlgebraText { dim, field, unit, mul, module })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds the algebra over `field`, checking the axioms.
    pub fn algebra<F: Field>(&self, field: &F) -> Result<CommutativeAlgebra<F>> {
        let n = self.dim;
        let unit = values(field, self.unit.0, &self.unit.1)?;
        let mut constants = vec![field.zero(); n * n * n];
        for (&(i, j), (l, vs)) in &self.mul {
            for (k, v) in values(field, *l, vs)?.into_iter().enumerate() {
                constants[(i * n + j) * n + k] = v;
            }
        }
        let alg = CommutativeAlgebra::new(field.clone(), n, constants, unit)?;
        let report = alg.validate();
        if !report.is_empty() {
            return Err(Error::input(format!("not a commutative unital algebra: {}", report.to_string().trim())));
        }
        Ok(alg)
    }

    /// The module section over `alg`, or the regular module.
    pub fn module<F: Field>(&self, alg: &CommutativeAlgebra<F>) -> Result<SymmetricBimodule<F>> {
        match &self.module {
            Some(m) => m.build(alg),
            None => Ok(SymmetricBimodule::regular(alg)),
        }
    }
}

impl ModuleText {
    /// Parses a file holding only a module section.
    pub fn parse(text: &str, alg_dim: usize) -> Result<Self> {
        let mut all = lines(text);
        let header = all.next().ok_or_else(|| Error::parse(1, "empty module file"))?;
        parse_module_lines(header, all, alg_dim)
    }

    pub fn read(path: &Path, alg_dim: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, alg_dim)
    }

    pub fn build<F: Field>(&self, alg: &CommutativeAlgebra<F>) -> Result<SymmetricBimodule<F>> {
        let (a, m) = (alg.dim(), self.dim);
        let f = alg.field();
        let mut constants = vec![f.zero(); a * m * m];
        for (&(i, j), (l, vs)) in &self.act {
            if i >= a {
                return Err(Error::parse(*l, format!("algebra index {i} out of range")));
            }
            for (k, v) in values(f, *l, vs)?.into_iter().enumerate() {
                constants[(i * m + j) * m + k] = v;
            }
        }
        let module = SymmetricBimodule::new(alg, m, constants)?;
        let report = module.validate(alg);
        if !report.is_empty() {
            return Err(Error::input(format!(
                "module declared on line {} is not a module: {}",
                self.line,
                report.to_string().trim()
            )));
        }
        Ok(module)
    }
}

fn values<F: Field>(field: &F, line: usize, vs: &[String]) -> Result<Vec<F::Elem>> {
    vs.iter()
        .map(|s| field.parse_elem(s).map_err(|e| Error::parse(line, e.to_string())))
        .collect()
}

/// Parses a pointed simplicial set; face identities are checked when the
/// complex is built.
pub fn parse_simplicial_set(text: &str) -> Result<FinitePointedSimplicialSet> {
    let mut all = lines(text);
    let (line, header) = all.next().ok_or_else(|| Error::parse(1, "empty simplicial set file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() != 2 || words[0] != "simplicial" {
        return Err(Error::parse(line, "expected `simplicial max_level=<N>`"));
    }
    let max_level = number(line, key_value(line, words[1], "max_level")?, "level")?;
    let mut sizes: Vec<Option<usize>> = vec![None; max_level + 1];
    let mut faces: BTreeMap<(usize, usize), (usize, Vec<u32>)> = BTreeMap::new();
    for (l, text) in all {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words[0] {
            "level" => {
                if words.len() != 3 {
                    return Err(Error::parse(l, "expected `level n size=<s>`"));
                }
                let n = number(l, words[1], "level")?;
                let s = number(l, key_value(l, words[2], "size")?, "size")?;
                let slot = sizes.get_mut(n).ok_or_else(|| Error::parse(l, format!("level {n} above max_level")))?;
                if slot.replace(s).is_some() {
                    return Err(Error::parse(l, format!("level {n} given twice")));
                }
            }
            "face" => {
                if words.len() < 3 || !words[2].ends_with(':') {
                    return Err(Error::parse(l, "expected `face n i: <images>`"));
                }
                let n = number(l, words[1], "level")?;
                let i = number(l, words[2].trim_end_matches(':'), "face index")?;
                if n == 0 || n > max_level || i > n {
                    return Err(Error::parse(l, format!("no face d_{i} at level {n}")));
                }
                let images = words[3..].iter().map(|w| number(l, w, "image").map(|x| x as u32)).collect::<Result<_>>()?;
                if faces.insert((n, i), (l, images)).is_some() {
                    return Err(Error::parse(l, format!("face {n} {i} given twice")));
                }
            }
            other => return Err(Error::parse(l, format!("unexpected `{other}`"))),
        }
    }
    let sizes = sizes
        .into_iter()
        .enumerate()
        .map(|(n, s)| s.ok_or_else(|| Error::parse(line, format!("missing size of level {n}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = vec![Vec::new()];
    for n in 1..=max_level {
        let mut level = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (l, images) = faces
                .remove(&(n, i))
                .ok_or_else(|| Error::parse(line, format!("missing face {n} {i}")))?;
            if images.len() != sizes[n] {
                return Err(Error::parse(l, format!("face {n} {i} needs {} images", sizes[n])));
            }
            level.push(PointedMap::new(images, sizes[n - 1]).map_err(|e| Error::parse(l, e.to_string()))?);
        }
        maps.push(level);
    }
    FinitePointedSimplicialSet::new(sizes, maps)
}

pub fn read_simplicial_set(path: &Path) -> Result<FinitePointedSimplicialSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_simplicial_set(&text)
}

/// Writes a simplicial set in the format read by [`parse_simplicial_set`].
pub fn write_simplicial_set(x: &FinitePointedSimplicialSet) -> String {
    let mut out = format!("simplicial max_level={}\n", x.max_level());
    for n in 0..=x.max_level() {
        out += &format!("level {n} size={}\n", x.level_size(n));
    }
    for n in 1..=x.max_level() {
        for (i, f) in x.faces(n).iter().enumerate() {
            let images: Vec<String> = f.images().iter().map(u32::to_string).collect();
            out += &format!("face {n} {i}: {}\n", images.join(" "));
        }
    }
    out
}
