//! Multilinear graded *-polynomials and the polynomial file format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Coeff, TriMatrix};
use crate::structure::{GradeSpec, InvolutionKind, StructureSpec, Symmetry};

/// Variable `i` of a polynomial: `y_i` (symmetric) or `z_i` (skew), with a
/// homogeneous degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSpec {
    pub index: usize,
    pub symmetry: Symmetry,
    pub degree: i64,
}

impl VarSpec {
    pub fn sym(index: usize, degree: i64) -> Self {
        VarSpec {
            index,
            symmetry: Symmetry::Sym,
            degree,
        }
    }

    pub fn skew(index: usize, degree: i64) -> Self {
        VarSpec {
            index,
            symmetry: Symmetry::Skew,
            degree,
        }
    }

    pub fn letter(&self) -> char {
        match self.symmetry {
            Symmetry::Sym => 'y',
            Symmetry::Skew => 'z',
        }
    }

    /// Name of the space this variable ranges over, e.g. `S_0`.
    pub fn space_name(&self, grade: &GradeSpec) -> String {
        let part = match self.symmetry {
            Symmetry::Sym => 'S',
            Symmetry::Skew => 'K',
        };
        format!("{part}_{}", grade.normalize(self.degree))
    }
}

impl fmt::Display for VarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.index)
    }
}

/// Variables `y_1..y_l` of the given degrees followed by skew `z_{l+1}..z_m`.
pub fn variables(sym_degrees: &[i64], skew_degrees: &[i64]) -> Vec<VarSpec> {
    let l = sym_degrees.len();
    sym_degrees
        .iter()
        .enumerate()
        .map(|(k, &d)| VarSpec::sym(k + 1, d))
        .chain(
            skew_degrees
                .iter()
                .enumerate()
                .map(|(k, &d)| VarSpec::skew(l + k + 1, d)),
        )
        .collect()
}

/// An element of `P_{m,l}^G`: coefficients indexed by words, each word a
/// permutation of the variable indices `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarPoly {
    field: FieldSpec,
    vars: Vec<VarSpec>,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl StarPoly {
    pub fn new(
        field: FieldSpec,
        vars: Vec<VarSpec>,
        terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<Self> {
        check_vars(&vars)?;
        let m = vars.len();
        let mut coeffs: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (word, c) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: c.field(),
                });
            }
            check_word(&word, m).map_err(|msg| Error::parse(1, 1, msg))?;
            let slot = coeffs.entry(word).or_insert_with(|| field.zero());
            *slot = &*slot + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(StarPoly { field, vars, coeffs })
    }

    /// A single word with coefficient one.
    pub fn monomial(field: FieldSpec, vars: Vec<VarSpec>, word: Vec<usize>) -> Result<Self> {
        StarPoly::new(field, vars, [(word, field.one())])
    }

    pub fn zero(field: FieldSpec, vars: Vec<VarSpec>) -> Result<Self> {
        StarPoly::new(field, vars, [])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn m(&self) -> usize {
        self.vars.len()
    }

    /// Number of symmetric variables.
    pub fn l(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.symmetry == Symmetry::Sym)
            .count()
    }

    /// Number of skew variables, `m - l`.
    pub fn eta(&self) -> usize {
        self.m() - self.l()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.coeffs.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn coeff(&self, word: &[usize]) -> Scalar {
        self.coeffs
            .get(word)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Reduces the coefficients into another field (e.g. `Q -> F_p`).
    pub fn reduce_to(&self, target: FieldSpec) -> Result<StarPoly> {
        let terms = self
            .coeffs
            .iter()
            .map(|(w, c)| Ok((w.clone(), c.reduce_to(target)?)))
            .collect::<Result<Vec<_>>>()?;
        StarPoly::new(target, self.vars.clone(), terms)
    }

    /// Total degree of every word, i.e. the component receiving the image.
    pub fn homogeneity(&self, grade: &GradeSpec) -> i64 {
        grade.normalize(self.vars.iter().map(|v| v.degree).sum())
    }

    /// Evaluates at matrices of any coefficient ring without checking which
    /// spaces they lie in.
    pub fn evaluate_unchecked<R: Coeff>(&self, args: &[TriMatrix<R>]) -> Result<TriMatrix<R>> {
        if args.len() != self.m() {
            return Err(Error::ArgumentCount {
                expected: self.m(),
                got: args.len(),
            });
        }
        let Some(first) = args.first() else {
            return Err(Error::Unsupported("polynomial without variables".into()));
        };
        let (n, field) = (first.n(), first.field());
        let mut acc = TriMatrix::zero(n, field);
        for (word, c) in &self.coeffs {
            let mut prod = args[word[0] - 1].clone();
            for &v in &word[1..] {
                prod = prod.try_mul(&args[v - 1])?;
            }
            acc = acc.try_add(&prod.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Evaluates at arguments that must lie in `S_g` / `K_g` of `s`.
    pub fn evaluate(&self, s: &StructureSpec, args: &[TriMatrix<Scalar>]) -> Result<TriMatrix<Scalar>> {
        self.check_args(s, args)?;
        self.evaluate_unchecked(args)
    }

    pub fn check_args(&self, s: &StructureSpec, args: &[TriMatrix<Scalar>]) -> Result<()> {
        if args.len() != self.m() {
            return Err(Error::ArgumentCount {
                expected: self.m(),
                got: args.len(),
            });
        }
        for (k, (a, v)) in args.iter().zip(&self.vars).enumerate() {
            if a.n() != s.n() {
                return Err(Error::DimensionMismatch {
                    left: s.n(),
                    right: a.n(),
                });
            }
            if a.field() != s.field() {
                return Err(Error::FieldMismatch {
                    left: s.field(),
                    right: a.field(),
                });
            }
            if !s.space(v.symmetry, v.degree).contains(a.as_slice()) {
                return Err(Error::ArgumentOutsideSpace {
                    index: k + 1,
                    space: v.space_name(s.grade()),
                });
            }
        }
        Ok(())
    }

    /// Parses a polynomial expression such as `2*y1 z2 - 1/3*z2 y1`. Variable
    /// degrees default to zero.
    pub fn parse(text: &str, field: FieldSpec) -> Result<StarPoly> {
        let raw = parse_expr(text, 1, 0, field)?;
        let vars = infer_vars(&raw, 1)?;
        build(field, vars, raw)
    }

    /// Parses an expression against a declared variable list.
    pub fn parse_with_vars(text: &str, field: FieldSpec, vars: Vec<VarSpec>) -> Result<StarPoly> {
        let raw = parse_expr(text, 1, 0, field)?;
        build(field, vars, raw)
    }

    /// The `vars` line of the file format.
    pub fn vars_line(&self) -> String {
        let items: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{v}:{}", v.degree))
            .collect();
        format!("vars {}", items.join(", "))
    }
}

impl fmt::Display for StarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (word, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, false) => {}
                (0, true) => f.write_str("- ")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            let names: Vec<String> = word.iter().map(|&v| self.vars[v - 1].to_string()).collect();
            match (mag.is_one(), names.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => f.write_str(&names.join(" "))?,
                (false, false) => write!(f, "{mag}*{}", names.join(" "))?,
            }
        }
        Ok(())
    }
}

fn check_vars(vars: &[VarSpec]) -> Result<()> {
    let mut seen_skew = false;
    for (k, v) in vars.iter().enumerate() {
        if v.index != k + 1 {
            return Err(Error::parse(
                1,
                1,
                format!("variables must be numbered 1..m in order, found {v} at position {}", k + 1),
            ));
        }
        match v.symmetry {
            Symmetry::Skew => seen_skew = true,
            Symmetry::Sym if seen_skew => {
                return Err(Error::parse(
                    1,
                    1,
                    format!("symmetric variable {v} follows a skew variable; number y's before z's"),
                ))
            }
            Symmetry::Sym => {}
        }
    }
    Ok(())
}

fn check_word(word: &[usize], m: usize) -> std::result::Result<(), String> {
    let mut seen = vec![false; m];
    for &v in word {
        if v == 0 || v > m {
            return Err(format!("variable index {v} outside 1..{m}"));
        }
        if seen[v - 1] {
            return Err(format!("variable {v} repeated; polynomial must be multilinear"));
        }
        seen[v - 1] = true;
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(format!("variable {} missing from a monomial; polynomial must be multilinear", k + 1));
    }
    Ok(())
}

/// A parsed variable occurrence: letter, index, column.
type RawVar = (char, usize, usize);

struct RawTerm {
    coeff: Scalar,
    vars: Vec<RawVar>,
    line: usize,
    col: usize,
}

fn parse_expr(text: &str, line: usize, col0: usize, field: FieldSpec) -> Result<Vec<RawTerm>> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    let col = |p: usize| col0 + p + 1;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            break;
        }
        let start = pos;
        let mut negative = false;
        match chars[pos] {
            '+' | '-' => {
                negative = chars[pos] == '-';
                pos += 1;
                skip_ws(&mut pos);
            }
            _ if !first => return Err(Error::parse(line, col(pos), "expected '+' or '-' between terms")),
            _ => {}
        }
        first = false;

        let mut coeff = field.one();
        let mut explicit = false;
        if pos < chars.len() && chars[pos].is_ascii_digit() {
            let cstart = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            let lit: String = chars[cstart..pos].iter().collect();
            coeff = Scalar::parse(&lit, field)
                .map_err(|e| Error::parse(line, col(cstart), format!("bad coefficient '{lit}': {e}")))?;
            explicit = true;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
            } else if pos < chars.len() && !matches!(chars[pos], '+' | '-') {
                return Err(Error::parse(line, col(pos), "expected '*' after coefficient"));
            }
        }

        let mut vars = Vec::new();
        while pos < chars.len() && !matches!(chars[pos], '+' | '-') {
            let c = chars[pos];
            if c != 'y' && c != 'z' {
                return Err(Error::parse(
                    line,
                    col(pos),
                    format!("unexpected character '{c}'; variables are y<i> or z<i>"),
                ));
            }
            let vcol = col(pos);
            pos += 1;
            let dstart = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if dstart == pos {
                return Err(Error::parse(line, vcol, format!("variable '{c}' needs an index")));
            }
            let idx: usize = chars[dstart..pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::parse(line, vcol, "variable index too large"))?;
            if idx == 0 {
                return Err(Error::parse(line, vcol, "variable indices start at 1"));
            }
            vars.push((c, idx, vcol));
            skip_ws(&mut pos);
        }
        if vars.is_empty() {
            if explicit && coeff.is_zero() {
                continue;
            }
            return Err(Error::parse(
                line,
                col(start),
                "constant term is not multilinear in the variables",
            ));
        }
        if negative {
            coeff = -coeff;
        }
        terms.push(RawTerm {
            coeff,
            vars,
            line,
            col: col(start),
        });
    }
    Ok(terms)
}

fn infer_vars(raw: &[RawTerm], line: usize) -> Result<Vec<VarSpec>> {
    let mut kinds: BTreeMap<usize, (char, usize, usize)> = BTreeMap::new();
    for t in raw {
        for &(c, idx, vcol) in &t.vars {
            if let Some(&(prev, _, _)) = kinds.get(&idx) {
                if prev != c {
                    return Err(Error::parse(
                        t.line,
                        vcol,
                        format!("index {idx} used both as y{idx} and z{idx}"),
                    ));
                }
            } else {
                kinds.insert(idx, (c, t.line, vcol));
            }
        }
    }
    let m = kinds.keys().next_back().copied().unwrap_or(0);
    let mut vars = Vec::with_capacity(m);
    for i in 1..=m {
        let Some(&(c, _, _)) = kinds.get(&i) else {
            return Err(Error::parse(line, 1, format!("variable index {i} never appears")));
        };
        vars.push(if c == 'y' { VarSpec::sym(i, 0) } else { VarSpec::skew(i, 0) });
    }
    if let Err(e) = check_vars(&vars) {
        let bad = vars
            .windows(2)
            .find(|w| w[0].symmetry == Symmetry::Skew && w[1].symmetry == Symmetry::Sym)
            .map(|w| w[1].index);
        let (l, c) = bad
            .and_then(|i| kinds.get(&i))
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((line, 1));
        return Err(match e {
            Error::Parse { message, .. } => Error::parse(l, c, message),
            other => other,
        });
    }
    Ok(vars)
}

fn build(field: FieldSpec, vars: Vec<VarSpec>, raw: Vec<RawTerm>) -> Result<StarPoly> {
    check_vars(&vars)?;
    let m = vars.len();
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        for &(c, idx, vcol) in &t.vars {
            let Some(v) = vars.get(idx.wrapping_sub(1)) else {
                return Err(Error::parse(t.line, vcol, format!("{c}{idx} is not a declared variable")));
            };
            if v.letter() != c {
                return Err(Error::parse(
                    t.line,
                    vcol,
                    format!("{c}{idx} conflicts with declared variable {v}"),
                ));
            }
        }
        let word: Vec<usize> = t.vars.iter().map(|&(_, i, _)| i).collect();
        check_word(&word, m).map_err(|msg| Error::parse(t.line, t.col, msg))?;
        terms.push((word, t.coeff));
    }
    StarPoly::new(field, vars, terms)
}

/// A structure together with a polynomial, as read from a polynomial file.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFile {
    pub structure: StructureSpec,
    pub poly: StarPoly,
}

impl PolyFile {
    /// Parses the line-oriented file format:
    ///
    /// ```text
    /// algebra ut3
    /// grading z2 degrees (0,1,0)
    /// involution reflexive
    /// field Q
    /// vars y1:0, z2:1
    /// poly 1*y1 z2 - 2*z2 y1
    /// ```
    ///
    /// `grading`, `involution`, `field` and `vars` are optional (trivial,
    /// reflexive, Q, inferred with degree 0). Several `poly` lines are summed.
    pub fn parse(text: &str) -> Result<PolyFile> {
        let mut n: Option<usize> = None;
        let mut grading: Option<(u64, Option<Vec<i64>>, usize)> = None;
        let mut inv = InvolutionKind::Reflexive;
        let mut field = FieldSpec::rationals();
        let mut vars_decl: Option<(Vec<VarSpec>, usize)> = None;
        let mut poly_lines: Vec<(usize, usize, String)> = Vec::new();
        let mut seen = BTreeSet::new();

        for (k, full) in text.lines().enumerate() {
            let line = k + 1;
            let content = full.split('#').next().unwrap_or("");
            let trimmed = content.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = content.len() - trimmed.len();
            let (kw, rest) = match trimmed.find(char::is_whitespace) {
                Some(p) => (&trimmed[..p], &trimmed[p..]),
                None => (trimmed, ""),
            };
            let rest_col = indent + kw.len();
            let arg = rest.trim();
            let arg_col = rest_col + (rest.len() - rest.trim_start().len()) + 1;
            if kw != "poly" && !seen.insert(kw.to_string()) {
                return Err(Error::parse(line, indent + 1, format!("duplicate '{kw}' line")));
            }
            match kw {
                "algebra" => {
                    let dim = arg
                        .strip_prefix("ut")
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&d| d >= 1)
                        .ok_or_else(|| Error::parse(line, arg_col, "expected 'ut<n>' with n >= 1"))?;
                    n = Some(dim);
                }
                "grading" => grading = Some(parse_grading(arg, line, arg_col)?),
                "involution" => {
                    inv = arg
                        .parse()
                        .map_err(|_| Error::parse(line, arg_col, "expected 'reflexive' or 'symplectic'"))?;
                }
                "field" => {
                    field = arg
                        .parse()
                        .map_err(|e: Error| Error::parse(line, arg_col, e.to_string()))?;
                }
                "vars" => vars_decl = Some((parse_vars(arg, line, arg_col)?, line)),
                "poly" => poly_lines.push((line, arg_col - 1, arg.to_string())),
                other => {
                    return Err(Error::parse(
                        line,
                        indent + 1,
                        format!("unknown keyword '{other}'"),
                    ))
                }
            }
        }

        let n = n.ok_or_else(|| Error::parse(1, 1, "missing 'algebra ut<n>' line"))?;
        let grade = match grading {
            None => GradeSpec::trivial(n),
            Some((1, None, _)) => GradeSpec::trivial(n),
            Some((q, Some(ds), line)) => {
                if ds.len() != n {
                    return Err(Error::parse(
                        line,
                        1,
                        format!("grading lists {} degrees but the algebra is ut{n}", ds.len()),
                    ));
                }
                GradeSpec::new(q, ds)
            }
            Some((_, None, line)) => return Err(Error::parse(line, 1, "grading needs 'degrees (...)'")),
        };
        let structure = StructureSpec::new(n, grade, inv, field)?;

        if poly_lines.is_empty() {
            return Err(Error::parse(1, 1, "missing 'poly' line"));
        }
        let mut raw = Vec::new();
        for (line, col0, expr) in &poly_lines {
            raw.extend(parse_expr(expr, *line, *col0, field)?);
        }
        let vars = match vars_decl {
            Some((v, _)) => v,
            None => infer_vars(&raw, poly_lines[0].0)?,
        };
        let poly = build(field, vars, raw)?;
        Ok(PolyFile { structure, poly })
    }

    /// Canonical text form; parsing it yields the same file.
    pub fn to_text(&self) -> String {
        let s = &self.structure;
        let mut out = format!("algebra ut{}\n", s.n());
        let g = s.grade();
        match g.modulus() {
            1 => out.push_str("grading trivial\n"),
            q => {
                let ds: Vec<String> = g.degrees().iter().map(|d| d.to_string()).collect();
                let name = if q == 0 { "z".to_string() } else { format!("z{q}") };
                out.push_str(&format!("grading {name} degrees ({})\n", ds.join(",")));
            }
        }
        out.push_str(&format!("involution {}\n", s.involution()));
        out.push_str(&format!("field {}\n", s.field()));
        out.push_str(&self.poly.vars_line());
        out.push('\n');
        out.push_str(&format!("poly {}\n", self.poly));
        out
    }
}

fn parse_grading(arg: &str, line: usize, col: usize) -> Result<(u64, Option<Vec<i64>>, usize)> {
    if arg == "trivial" {
        return Ok((1, None, line));
    }
    let (group, rest) = arg
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::parse(line, col, "expected 'trivial' or 'z<q> degrees (d1,...,dn)'"))?;
    let q: u64 = match group.strip_prefix('z') {
        Some("") => 0,
        Some(d) => d
            .parse()
            .map_err(|_| Error::parse(line, col, format!("bad group '{group}'")))?,
        None => return Err(Error::parse(line, col, format!("bad group '{group}'"))),
    };
    let rest = rest.trim();
    let list = rest
        .strip_prefix("degrees")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::parse(line, col + group.len() + 1, "expected 'degrees (d1,...,dn)'"))?;
    let ds = list
        .split(',')
        .map(|d| d.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::parse(line, col + group.len() + 1, "degrees must be integers"))?;
    Ok((q, Some(ds), line))
}

fn is_sep(c: char) -> bool {
    c == ',' || c.is_whitespace()
}

/// Variables separated by commas or whitespace, each `y<i>` or `z<i>` with an
/// optional `:<degree>`.
fn parse_vars(arg: &str, line: usize, col: usize) -> Result<Vec<VarSpec>> {
    let mut vars = Vec::new();
    let items = arg
        .char_indices()
        .filter(|&(k, c)| !is_sep(c) && (k == 0 || is_sep(arg[..k].chars().next_back().unwrap())))
        .map(|(k, _)| {
            let end = arg[k..].find(is_sep).map_or(arg.len(), |e| k + e);
            (k, &arg[k..end])
        });
    for (k, item) in items {
        let icol = col + arg[..k].chars().count();
        let (name, deg) = match item.split_once(':') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (item, "0"),
        };
        let mut cs = name.chars();
        let letter = cs.next().unwrap_or(' ');
        let idx: usize = cs
            .as_str()
            .parse()
            .map_err(|_| Error::parse(line, icol, format!("bad variable '{name}'")))?;
        let degree: i64 = deg
            .parse()
            .map_err(|_| Error::parse(line, icol, format!("bad degree '{deg}'")))?;
        let v = match letter {
            'y' => VarSpec::sym(idx, degree),
            'z' => VarSpec::skew(idx, degree),
            _ => return Err(Error::parse(line, icol, format!("bad variable '{name}'"))),
        };
        if v.index != vars.len() + 1 {
            return Err(Error::parse(line, icol, format!("expected variable index {}", vars.len() + 1)));
        }
        vars.push(v);
    }
    check_vars(&vars).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(line, col, message),
        other => other,
    })?;
    Ok(vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::e;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn parses_and_merges() {
        let f = StarPoly::parse("1*z1 z2", q()).unwrap();
        assert_eq!((f.m(), f.l()), (2, 0));
        assert_eq!(f.coeff(&[1, 2]), q().one());
        let g = StarPoly::parse("1*y1 z2 + 1*z2 y1", q()).unwrap();
        assert_eq!(g.terms().count(), 2);
        assert!(StarPoly::parse("1*y1 z2 - 1*y1 z2", q()).unwrap().is_zero());
    }

    #[test]
    fn canonical_print_round_trips() {
        let f = StarPoly::parse("-2*z2 y1 + 3/4*y1 z2", q()).unwrap();
        let text = f.to_string();
        assert_eq!(text, "3/4*y1 z2 - 2*z2 y1");
        assert_eq!(StarPoly::parse(&text, q()).unwrap(), f);
        let g = StarPoly::parse("- 2*z2 y1", q()).unwrap();
        assert_eq!(g.to_string(), "- 2*z2 y1");
    }

    #[test]
    fn rejects_non_multilinear_and_bad_blocks() {
        assert!(matches!(StarPoly::parse("y1 y1", q()), Err(Error::Parse { .. })));
        assert!(matches!(StarPoly::parse("y1 y2 + y1", q()), Err(Error::Parse { .. })));
        let err = StarPoly::parse("z1 y2", q()).unwrap_err();
        assert!(err.to_string().contains("follows a skew"));
        assert!(matches!(StarPoly::parse("3", q()), Err(Error::Parse { .. })));
    }

    #[test]
    fn error_positions() {
        let err = StarPoly::parse("y1 y2 x3", q()).unwrap_err();
        assert_eq!(err, Error::parse(1, 7, "unexpected character 'x'; variables are y<i> or z<i>"));
    }

    #[test]
    fn evaluate_checks_spaces() {
        let f = q();
        let s = StructureSpec::trivial(3, InvolutionKind::Reflexive, f).unwrap();
        let p = StarPoly::parse("z1 z2", f).unwrap();
        let a = e(3, 1, 1, f).try_sub(&e(3, 3, 3, f)).unwrap();
        let v = p.evaluate(&s, &[a.clone(), a.clone()]).unwrap();
        assert_eq!(v, e(3, 1, 1, f).try_add(&e(3, 3, 3, f)).unwrap());
        let err = p.evaluate(&s, &[a, e(3, 1, 1, f)]).unwrap_err();
        assert_eq!(
            err,
            Error::ArgumentOutsideSpace {
                index: 2,
                space: "K_0".into()
            }
        );
    }

    #[test]
    fn file_round_trip() {
        let text = "# comment\nalgebra ut3\ngrading z2 degrees (0,1,0)\ninvolution reflexive\nfield F5\nvars y1:0, z2:1\npoly 2*y1 z2 - z2 y1\n";
        let pf = PolyFile::parse(text).unwrap();
        assert_eq!(pf.poly.to_string(), "2*y1 z2 + 4*z2 y1");
        assert_eq!(PolyFile::parse(&pf.to_text()).unwrap(), pf);
    }

    #[test]
    fn file_errors_carry_lines() {
        let err = PolyFile::parse("algebra ut2\nbogus 3\npoly y1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 1, .. }));
        let err = PolyFile::parse("algebra ut2\npoly y1 y1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = PolyFile::parse("algebra ut3\ngrading z3 degrees (0,1,1)\npoly y1").unwrap_err();
        assert!(matches!(err, Error::InvalidStructure { ref clause, .. } if clause == "compatibility"));
    }

    #[test]
    fn zero_polynomial_with_declared_vars() {
        let pf = PolyFile::parse("algebra ut2\nvars z1:0\npoly 0").unwrap();
        assert!(pf.poly.is_zero());
        assert_eq!(pf.poly.m(), 1);
    }
}
