//! JSON documents for algebras, modules and twisted complexes.
//!
//! Every document has one canonical form: the output of [`to_canonical`] on the value produced by
//! the emitters below. Objects are written with sorted keys, lists in basis order, scalars as
//! strings.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dgforge_core::corpus;
use dgforge_core::dg::{AlgebraBasisElem, DgAlgebra, DgModule, Lin, ModuleBasisElem};
use dgforge_core::scalars::{FieldSpec, Scalar};
use dgforge_core::twisted::{Cell, TwistedComplex};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// A coefficient: an integer, or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Int(i64),
    Text(String),
}

impl Coef {
    fn parse(&self, field: FieldSpec) -> Result<Scalar, CliError> {
        match self {
            Coef::Int(n) => Ok(field.from_i64(*n)),
            Coef::Text(s) => field.parse(s).map_err(|e| CliError::Schema(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub c: String,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElemTerm {
    pub elem: String,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeDoc {
    #[serde(rename = "Fp")]
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Prime(PrimeDoc),
}

impl FieldDoc {
    pub fn of(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => FieldDoc::Name("Q".into()),
            FieldSpec::PrimeField(p) => FieldDoc::Prime(PrimeDoc { p: p.into() }),
        }
    }

    pub fn spec(&self) -> Result<FieldSpec, CliError> {
        match self {
            FieldDoc::Name(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDoc::Name(s) => Err(CliError::Schema(format!("unknown field {s:?}, expected \"Q\" or {{\"Fp\": p}}"))),
            FieldDoc::Prime(PrimeDoc { p }) => FieldSpec::prime(*p).map_err(|e| CliError::Schema(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBasisDoc {
    pub name: String,
    pub deg: i64,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub basis: Vec<AlgebraBasisDoc>,
    pub idempotents: Vec<String>,
    #[serde(default)]
    pub mult: Vec<(String, String, Vec<Term>)>,
    #[serde(default)]
    pub diff: Vec<(String, Vec<Term>)>,
}

/// How a module or twisted complex names its algebra: a corpus name (`"lambda"`, `"quiver@F3"`),
/// a path relative to the referring document, or the algebra document itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(Box<AlgebraDoc>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBasisDoc {
    pub name: String,
    pub deg: i64,
    pub idem: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub algebra: AlgebraRef,
    pub basis: Vec<ModuleBasisDoc>,
    #[serde(default)]
    pub diff: Vec<(String, Vec<Term>)>,
    #[serde(default)]
    pub action: Vec<(String, String, Vec<Term>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub idem: String,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedDoc {
    pub algebra: AlgebraRef,
    pub cells: Vec<CellDoc>,
    #[serde(default)]
    pub delta: Vec<(usize, usize, Vec<ElemTerm>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Algebra,
    Module,
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Algebra(AlgebraDoc),
    Module(ModuleDoc),
    Twisted(TwistedDoc),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Algebra(_) => Kind::Algebra,
            Document::Module(_) => Kind::Module,
            Document::Twisted(_) => Kind::Twisted,
        }
    }

    pub fn to_value(&self) -> Value {
        let v = match self {
            Document::Algebra(d) => serde_json::to_value(d),
            Document::Module(d) => serde_json::to_value(d),
            Document::Twisted(d) => serde_json::to_value(d),
        };
        v.expect("documents serialize")
    }

    pub fn to_canonical(&self) -> String {
        to_canonical(&self.to_value())
    }
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses a document, telling the kinds apart by their keys.
pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let Some(obj) = v.as_object() else {
        return Err(CliError::Schema("a document must be a JSON object".into()));
    };
    let schema = |e: serde_json::Error| CliError::Schema(e.to_string());
    if obj.contains_key("cells") {
        serde_json::from_value(v).map(Document::Twisted).map_err(schema)
    } else if obj.contains_key("algebra") {
        serde_json::from_value(v).map(Document::Module).map_err(schema)
    } else if obj.contains_key("idempotents") {
        serde_json::from_value(v).map(Document::Algebra).map_err(schema)
    } else {
        Err(CliError::Schema("cannot tell the document kind: expected \"cells\", \"algebra\" or \"idempotents\"".into()))
    }
}

fn index_map<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> Result<HashMap<&'a str, usize>, CliError> {
    let mut out = HashMap::new();
    for (i, n) in names.enumerate() {
        if out.insert(n, i).is_some() {
            return Err(CliError::Schema(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(out)
}

fn lookup(map: &HashMap<&str, usize>, name: &str, what: &str) -> Result<usize, CliError> {
    map.get(name).copied().ok_or_else(|| CliError::Schema(format!("unknown {what} {name:?}")))
}

fn lin_of(terms: &[Term], names: &HashMap<&str, usize>, field: FieldSpec, what: &str) -> Result<Lin, CliError> {
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        pairs.push((lookup(names, &t.c, what)?, t.coef.parse(field)?));
    }
    Ok(Lin::from_terms(pairs))
}

fn terms_of(v: &Lin, names: impl Fn(usize) -> String) -> Vec<Term> {
    v.terms().iter().map(|(i, c)| Term { c: names(*i), coef: Coef::Text(c.to_string()) }).collect()
}

fn core_err(e: dgforge_core::Error) -> CliError {
    CliError::Core(e)
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<DgAlgebra, CliError> {
        let field = self.field.spec()?;
        let names = index_map(self.basis.iter().map(|b| b.name.as_str()), "basis element")?;
        let idems = index_map(self.idempotents.iter().map(String::as_str), "idempotent")?;
        let mut basis = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            basis.push(AlgebraBasisElem {
                name: b.name.clone(),
                degree: b.deg,
                source: lookup(&idems, &b.src, "idempotent")?,
                target: lookup(&idems, &b.tgt, "idempotent")?,
            });
        }
        let idempotents = self.idempotents.iter().map(|e| lookup(&names, e, "basis element")).collect::<Result<_, _>>()?;
        let mut mult = Vec::new();
        for (a, b, terms) in &self.mult {
            mult.push((lookup(&names, a, "basis element")?, lookup(&names, b, "basis element")?, lin_of(terms, &names, field, "basis element")?));
        }
        let mut diff = Vec::new();
        for (a, terms) in &self.diff {
            diff.push((lookup(&names, a, "basis element")?, lin_of(terms, &names, field, "basis element")?));
        }
        DgAlgebra::new(field, basis, idempotents, mult, diff).map_err(core_err)
    }

    /// Lists the products that the unit axioms do not already determine.
    pub fn of(alg: &DgAlgebra) -> Self {
        let basis = alg.basis();
        let name = |i: usize| basis[i].name.clone();
        let idem_name = |k: usize| name(alg.idempotent(k));
        let n = alg.dim();
        let f = alg.field();
        let mut mult = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let implied = match (idem_index(alg, a), idem_index(alg, b)) {
                    (Some(i), _) if basis[b].target == i => Lin::basis(b, f),
                    (Some(_), _) => Lin::zero(),
                    (None, Some(j)) if basis[a].source == j => Lin::basis(a, f),
                    _ => Lin::zero(),
                };
                let v = alg.mul(a, b);
                if *v != implied {
                    mult.push((name(a), name(b), terms_of(v, name)));
                }
            }
        }
        let diff = (0..n).filter(|&a| !alg.diff(a).is_zero()).map(|a| (name(a), terms_of(alg.diff(a), name))).collect();
        AlgebraDoc {
            field: FieldDoc::of(f),
            basis: basis
                .iter()
                .map(|b| AlgebraBasisDoc { name: b.name.clone(), deg: b.degree, src: idem_name(b.source), tgt: idem_name(b.target) })
                .collect(),
            idempotents: (0..alg.idempotent_count()).map(idem_name).collect(),
            mult,
            diff,
        }
    }
}

fn idem_index(alg: &DgAlgebra, a: usize) -> Option<usize> {
    alg.idempotents().iter().position(|&e| e == a)
}

/// Names of the idempotents, in order.
pub fn idempotent_names(alg: &DgAlgebra) -> Vec<String> {
    alg.idempotents().iter().map(|&e| alg.elem(e).name.clone()).collect()
}

fn idem_lookup(alg: &DgAlgebra) -> HashMap<String, usize> {
    idempotent_names(alg).into_iter().enumerate().map(|(i, n)| (n, i)).collect()
}

impl ModuleDoc {
    pub fn build(&self, alg: &Arc<DgAlgebra>) -> Result<DgModule, CliError> {
        let f = alg.field();
        let idems = idem_lookup(alg);
        let names = index_map(self.basis.iter().map(|b| b.name.as_str()), "module basis element")?;
        let alg_names = index_map(alg.basis().iter().map(|b| b.name.as_str()), "algebra basis element")?;
        let mut basis = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let idem = *idems.get(&b.idem).ok_or_else(|| CliError::Schema(format!("unknown idempotent {:?}", b.idem)))?;
            basis.push(ModuleBasisElem { name: b.name.clone(), degree: b.deg, idem });
        }
        let mut diff = Vec::new();
        for (m, terms) in &self.diff {
            diff.push((lookup(&names, m, "module basis element")?, lin_of(terms, &names, f, "module basis element")?));
        }
        let mut action = Vec::new();
        for (m, a, terms) in &self.action {
            action.push((
                lookup(&names, m, "module basis element")?,
                lookup(&alg_names, a, "algebra basis element")?,
                lin_of(terms, &names, f, "module basis element")?,
            ));
        }
        DgModule::new(alg.clone(), basis, diff, action).map_err(core_err)
    }

    pub fn of(m: &DgModule, algebra: AlgebraRef) -> Self {
        let alg = m.algebra();
        let idems = idempotent_names(alg);
        let name = |i: usize| m.basis()[i].name.clone();
        let mut diff = Vec::new();
        let mut action = Vec::new();
        for j in 0..m.dim() {
            if !m.diff(j).is_zero() {
                diff.push((name(j), terms_of(m.diff(j), name)));
            }
        }
        for j in 0..m.dim() {
            for a in (0..alg.dim()).filter(|&a| !alg.is_idempotent(a)) {
                let v = m.act(j, a);
                if !v.is_zero() {
                    action.push((name(j), alg.elem(a).name.clone(), terms_of(v, name)));
                }
            }
        }
        ModuleDoc {
            algebra,
            basis: m
                .basis()
                .iter()
                .map(|b| ModuleBasisDoc { name: b.name.clone(), deg: b.degree, idem: idems[b.idem].clone() })
                .collect(),
            diff,
            action,
        }
    }
}

impl TwistedDoc {
    pub fn build(&self, alg: &Arc<DgAlgebra>) -> Result<TwistedComplex, CliError> {
        let f = alg.field();
        let idems = idem_lookup(alg);
        let alg_names = index_map(alg.basis().iter().map(|b| b.name.as_str()), "algebra basis element")?;
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let idem = *idems.get(&c.idem).ok_or_else(|| CliError::Schema(format!("unknown idempotent {:?}", c.idem)))?;
            cells.push(Cell::new(idem, c.shift));
        }
        let mut entries = Vec::new();
        for (s, t, terms) in &self.delta {
            if *s >= cells.len() || *t >= cells.len() {
                return Err(CliError::Schema(format!("delta entry ({s}, {t}) refers to a missing cell")));
            }
            let mut pairs = Vec::with_capacity(terms.len());
            for term in terms {
                pairs.push((lookup(&alg_names, &term.elem, "algebra basis element")?, term.coef.parse(f)?));
            }
            entries.push((*s, *t, Lin::from_terms(pairs)));
        }
        TwistedComplex::new(alg.clone(), cells, entries).map_err(core_err)
    }

    pub fn of(x: &TwistedComplex, algebra: AlgebraRef) -> Self {
        let alg = x.algebra();
        let idems = idempotent_names(alg);
        let delta = x
            .entries()
            .into_iter()
            .map(|(s, t, v)| {
                let terms = v
                    .terms()
                    .iter()
                    .map(|(i, c)| ElemTerm { elem: alg.elem(*i).name.clone(), coef: Coef::Text(c.to_string()) })
                    .collect();
                (s, t, terms)
            })
            .collect();
        TwistedDoc {
            algebra,
            cells: x.cells().iter().map(|c| CellDoc { idem: idems[c.idem].clone(), shift: c.shift }).collect(),
            delta,
        }
    }
}

/// A built document.
#[derive(Clone, Debug)]
pub enum Object {
    Algebra(Arc<DgAlgebra>),
    Module(Arc<DgModule>),
    Twisted(TwistedComplex),
}

impl Object {
    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        match self {
            Object::Algebra(a) => a,
            Object::Module(m) => m.algebra(),
            Object::Twisted(x) => x.algebra(),
        }
    }
}

/// A document read from disk.
#[derive(Clone, Debug)]
pub struct Loaded {
    /// The path as given on the command line.
    pub name: String,
    pub doc: Document,
    /// `Err` when the document is well formed but violates the axioms of its kind.
    pub object: Result<Object, CliError>,
}

impl Loaded {
    /// The algebra reference to reuse for documents derived from this one.
    pub fn algebra_ref(&self) -> AlgebraRef {
        match &self.doc {
            Document::Module(d) => d.algebra.clone(),
            Document::Twisted(d) => d.algebra.clone(),
            Document::Algebra(d) => AlgebraRef::Inline(Box::new(d.clone())),
        }
    }

    pub fn object(&self) -> Result<&Object, CliError> {
        self.object.as_ref().map_err(Clone::clone)
    }

    /// The document with its algebra written out in full, as used for cache keys.
    pub fn self_contained(&self) -> String {
        let inline = |o: &Object| AlgebraRef::Inline(Box::new(AlgebraDoc::of(o.algebra())));
        match (&self.doc, &self.object) {
            (Document::Module(_), Ok(o @ Object::Module(m))) => Document::Module(ModuleDoc::of(m, inline(o))).to_canonical(),
            (Document::Twisted(_), Ok(o @ Object::Twisted(x))) => Document::Twisted(TwistedDoc::of(x, inline(o))).to_canonical(),
            _ => self.doc.to_canonical(),
        }
    }
}

/// Reads documents and resolves algebra references, sharing one `Arc` per distinct algebra.
#[derive(Default)]
pub struct Loader {
    algebras: HashMap<String, Arc<DgAlgebra>>,
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(&mut self, path: &Path) -> Result<Loaded, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let doc = parse_document(&text).map_err(|e| e.context(&path.display().to_string()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let object = self.build(&doc, &base);
        if let Err(e @ (CliError::Io(_) | CliError::Schema(_))) = &object {
            return Err(e.clone().context(&path.display().to_string()));
        }
        Ok(Loaded { name: path.display().to_string(), doc, object })
    }

    pub fn build(&mut self, doc: &Document, base: &Path) -> Result<Object, CliError> {
        match doc {
            Document::Algebra(d) => self.intern(d).map(Object::Algebra),
            Document::Module(d) => {
                let alg = self.resolve(&d.algebra, base)?;
                Ok(Object::Module(Arc::new(d.build(&alg)?)))
            }
            Document::Twisted(d) => {
                let alg = self.resolve(&d.algebra, base)?;
                Ok(Object::Twisted(d.build(&alg)?))
            }
        }
    }

    fn intern(&mut self, d: &AlgebraDoc) -> Result<Arc<DgAlgebra>, CliError> {
        let key = Document::Algebra(d.clone()).to_canonical();
        if let Some(a) = self.algebras.get(&key) {
            return Ok(a.clone());
        }
        let a = Arc::new(d.build()?);
        // Re-key on the emitted form so equal algebras written differently are shared.
        let canon = Document::Algebra(AlgebraDoc::of(&a)).to_canonical();
        let a = self.algebras.entry(canon).or_insert(a).clone();
        self.algebras.insert(key, a.clone());
        Ok(a)
    }

    pub fn resolve(&mut self, r: &AlgebraRef, base: &Path) -> Result<Arc<DgAlgebra>, CliError> {
        match r {
            AlgebraRef::Inline(d) => self.intern(d),
            AlgebraRef::Name(name) => {
                if let Some(a) = corpus_algebra(name)? {
                    return self.intern(&AlgebraDoc::of(&a));
                }
                let path: PathBuf = base.join(name);
                let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("algebra {name:?}: {e}")))?;
                match parse_document(&text)? {
                    Document::Algebra(d) => self.intern(&d),
                    _ => Err(CliError::Schema(format!("{} is not an algebra document", path.display()))),
                }
            }
        }
    }
}

/// `"lambda"` or `"lambda@F5"`; `None` if the name is not a corpus algebra.
pub fn corpus_algebra(name: &str) -> Result<Option<Arc<DgAlgebra>>, CliError> {
    let (base, field) = match name.split_once('@') {
        Some((b, f)) => {
            let p = f.strip_prefix('F').and_then(|p| p.parse::<u64>().ok());
            let Some(p) = p else { return Ok(None) };
            (b, FieldSpec::prime(p).map_err(|e| CliError::Schema(e.to_string()))?)
        }
        None => (name, FieldSpec::Rationals),
    };
    Ok(corpus::by_name(base, field))
}
