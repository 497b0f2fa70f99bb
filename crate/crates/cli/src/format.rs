//! Election documents and witness files.
//!
//! ```text
//! document  := (blank | comment | directive | ballot | setting)*
//! comment   := '#' any*                      (also allowed after content)
//! directive := 'VERSION' int
//!            | 'CANDIDATES' label+
//!            | 'PROTOCOL' protocol
//!            | 'TIEBREAK' ('pessimistic' | 'optimistic' | 'lexicographic' label+)
//!            | 'BALLOTS'                     (ballot lines follow)
//!            | 'MANIPULATION'                (setting lines follow)
//! protocol  := 'plurality' | 'borda' | 'veto' | 'scoring' int+
//!            | 'maximin' | 'copeland' | 'stv' | 'runoff'
//!            | 'cup' tree? | 'randomized-cup'
//! tree      := label | '(' tree ',' tree ')'
//! ballot    := weight ':' label (',' label)*
//! setting   := 'weights' int* | 'goal' ('constructive' | 'destructive') label
//!            | 'threshold' num ('/' den)?
//! label     := [A-Za-z0-9_]+
//! ```
//!
//! `CANDIDATES` must come before anything that names a candidate. `VERSION`
//! defaults to 1 and `TIEBREAK` to pessimistic. A `cup` without a tree uses
//! the balanced bracket filled in candidate order.

use std::collections::HashMap;
use std::fmt::Write as _;

use cwm_core::election::{validate_profile, Candidate, Profile, WeightedBallot};
use cwm_core::generate::ProtocolFamily;
use cwm_core::manipulation::{Goal, ManipulationInstance};
use cwm_core::protocols::{CupTree, ProtocolSpec, ScoringVector, TieBreak};
use num_rational::Ratio;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown protocol {0:?}")]
    UnknownProtocol(String),
    #[error("unknown candidate label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate candidate label {0:?}")]
    DuplicateLabel(String),
    #[error("weight {0:?} is not a positive integer")]
    BadWeight(String),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("section {0} appears twice")]
    DuplicateSection(&'static str),
    #[error("section {0} is missing")]
    MissingSection(&'static str),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// How the protocol was written, so that it serializes back the same way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolDecl {
    Named(ProtocolFamily),
    Scoring(Vec<i64>),
    Cup(CupTree),
}

impl ProtocolDecl {
    pub fn spec(&self, m: usize) -> Result<ProtocolSpec, String> {
        Ok(match self {
            ProtocolDecl::Named(family) => family.spec(m),
            ProtocolDecl::Scoring(alpha) => {
                ProtocolSpec::Scoring(ScoringVector::new(alpha.clone()).map_err(|e| e.to_string())?)
            }
            ProtocolDecl::Cup(tree) => ProtocolSpec::Cup(tree.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationDecl {
    pub weights: Vec<u64>,
    pub goal: Goal,
    pub threshold: Option<Ratio<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionDocument {
    pub version: u32,
    pub labels: Vec<String>,
    pub protocol: ProtocolDecl,
    pub tie_break: TieBreak,
    pub ballots: Vec<WeightedBallot>,
    pub manipulation: Option<ManipulationDecl>,
}

impl ElectionDocument {
    pub fn candidates(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, c: Candidate) -> &str {
        &self.labels[c]
    }

    pub fn profile(&self) -> Profile {
        Profile::new(self.candidates(), self.ballots.clone()).expect("validated at parse time")
    }

    pub fn spec(&self) -> ProtocolSpec {
        self.protocol
            .spec(self.candidates())
            .expect("validated at parse time")
    }

    /// The manipulation question, with `tie_break` overriding the document's policy.
    pub fn instance(&self, tie_break: Option<&TieBreak>) -> Result<ManipulationInstance, String> {
        let decl = self
            .manipulation
            .as_ref()
            .ok_or("document has no MANIPULATION section")?;
        ManipulationInstance::new(
            self.profile(),
            decl.weights.clone(),
            decl.goal,
            self.spec(),
            tie_break.unwrap_or(&self.tie_break).clone(),
            decl.threshold,
        )
        .map_err(|e| e.to_string())
    }

    /// A document for `inst`, with candidates named `a`, `b`, ...
    pub fn from_instance(inst: &ManipulationInstance) -> Self {
        let labels = default_labels(inst.candidates());
        let protocol = match inst.protocol() {
            ProtocolSpec::Scoring(alpha) => {
                let m = inst.candidates();
                [
                    ProtocolFamily::Plurality,
                    ProtocolFamily::Borda,
                    ProtocolFamily::Veto,
                ]
                .into_iter()
                .find(|f| &f.spec(m) == inst.protocol())
                .map(ProtocolDecl::Named)
                .unwrap_or_else(|| ProtocolDecl::Scoring(alpha.alpha().to_vec()))
            }
            ProtocolSpec::Maximin => ProtocolDecl::Named(ProtocolFamily::Maximin),
            ProtocolSpec::Copeland => ProtocolDecl::Named(ProtocolFamily::Copeland),
            ProtocolSpec::Stv => ProtocolDecl::Named(ProtocolFamily::Stv),
            ProtocolSpec::PluralityRunoff => ProtocolDecl::Named(ProtocolFamily::Runoff),
            ProtocolSpec::Cup(tree) => ProtocolDecl::Cup(tree.clone()),
            ProtocolSpec::RandomizedCup => ProtocolDecl::Named(ProtocolFamily::RandomizedCup),
        };
        ElectionDocument {
            version: FORMAT_VERSION,
            labels,
            protocol,
            tie_break: inst.tie_break().clone(),
            ballots: inst.nonmanipulators().ballots().to_vec(),
            manipulation: Some(ManipulationDecl {
                weights: inst.weights().to_vec(),
                goal: inst.goal(),
                threshold: inst.threshold(),
            }),
        }
    }

    pub fn render_ballot(&self, order: &[Candidate]) -> String {
        order
            .iter()
            .map(|&c| self.label(c))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `a`..`z`, then `c26`, `c27`, ...
pub fn default_labels(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("c{i}")
            }
        })
        .collect()
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (s + 1, t)).collect()
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Top,
    Ballots,
    Manipulation,
}

struct Parser {
    line: usize,
    labels: Option<Vec<String>>,
    index: HashMap<String, Candidate>,
    version: Option<u32>,
    protocol: Option<(usize, ProtocolDecl)>,
    tie_break: Option<(usize, TieBreak)>,
    ballots: Vec<WeightedBallot>,
    ballots_seen: bool,
    manipulation: Option<usize>,
    weights: Option<Vec<u64>>,
    goal: Option<Goal>,
    threshold: Option<Ratio<u64>>,
}

impl Parser {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> ParseError {
        self.err(column, ParseErrorKind::Syntax(msg.into()))
    }

    fn resolve(&self, column: usize, label: &str) -> Result<Candidate, ParseError> {
        if self.labels.is_none() {
            return Err(self.syntax(column, "CANDIDATES must come first"));
        }
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| self.err(column, ParseErrorKind::UnknownLabel(label.to_string())))
    }

    fn directive(&mut self, toks: &[(usize, &str)]) -> Result<Option<Block>, ParseError> {
        let (col, word) = toks[0];
        let rest = &toks[1..];
        let block = match word {
            "VERSION" => {
                if self.version.is_some() {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("VERSION")));
                }
                let [(c, v)] = rest else {
                    return Err(self.syntax(col, "VERSION takes one integer"));
                };
                let v: u32 = v
                    .parse()
                    .map_err(|_| self.syntax(*c, "VERSION takes one integer"))?;
                if v != FORMAT_VERSION {
                    return Err(self.err(*c, ParseErrorKind::Version(v)));
                }
                self.version = Some(v);
                Block::Top
            }
            "CANDIDATES" => {
                if self.labels.is_some() {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("CANDIDATES")));
                }
                if rest.is_empty() {
                    return Err(self.syntax(col, "CANDIDATES needs at least one label"));
                }
                let mut labels = Vec::new();
                for &(c, label) in rest {
                    if !is_label(label) {
                        return Err(self.syntax(c, format!("{label:?} is not a valid label")));
                    }
                    if self.index.insert(label.to_string(), labels.len()).is_some() {
                        return Err(self.err(c, ParseErrorKind::DuplicateLabel(label.to_string())));
                    }
                    labels.push(label.to_string());
                }
                self.labels = Some(labels);
                Block::Top
            }
            "PROTOCOL" => {
                if self.protocol.is_some() {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("PROTOCOL")));
                }
                let decl = self.protocol_decl(col, rest)?;
                self.protocol = Some((self.line, decl));
                Block::Top
            }
            "TIEBREAK" => {
                if self.tie_break.is_some() {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("TIEBREAK")));
                }
                let tb = match rest {
                    [(_, "pessimistic")] => TieBreak::Pessimistic,
                    [(_, "optimistic")] => TieBreak::Optimistic,
                    [(_, "lexicographic"), order @ ..] => {
                        let order = order
                            .iter()
                            .map(|&(c, l)| self.resolve(c, l))
                            .collect::<Result<Vec<_>, _>>()?;
                        TieBreak::Lexicographic(order)
                    }
                    _ => return Err(self.syntax(
                        col,
                        "TIEBREAK is pessimistic, optimistic or lexicographic followed by labels",
                    )),
                };
                self.tie_break = Some((self.line, tb));
                Block::Top
            }
            "BALLOTS" => {
                if self.ballots_seen {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("BALLOTS")));
                }
                if let Some(&(c, _)) = rest.first() {
                    return Err(self.syntax(c, "ballots go on the following lines"));
                }
                self.ballots_seen = true;
                Block::Ballots
            }
            "MANIPULATION" => {
                if self.manipulation.is_some() {
                    return Err(self.err(col, ParseErrorKind::DuplicateSection("MANIPULATION")));
                }
                if let Some(&(c, _)) = rest.first() {
                    return Err(self.syntax(c, "settings go on the following lines"));
                }
                self.manipulation = Some(self.line);
                Block::Manipulation
            }
            _ => return Ok(None),
        };
        Ok(Some(block))
    }

    fn protocol_decl(
        &self,
        col: usize,
        rest: &[(usize, &str)],
    ) -> Result<ProtocolDecl, ParseError> {
        let Some(&(name_col, name)) = rest.first() else {
            return Err(self.syntax(col, "PROTOCOL needs a name"));
        };
        let params = &rest[1..];
        match name {
            "scoring" => {
                if params.is_empty() {
                    return Err(self.syntax(name_col, "scoring needs its score vector"));
                }
                let alpha = params
                    .iter()
                    .map(|&(c, v)| {
                        v.parse::<i64>()
                            .map_err(|_| self.syntax(c, format!("{v:?} is not an integer")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ProtocolDecl::Scoring(alpha))
            }
            "cup" if !params.is_empty() => {
                let start = params[0].0;
                let text: String = params.iter().map(|&(_, t)| t).collect();
                let mut pos = 0;
                let tree = self.tree(start, text.as_bytes(), &mut pos)?;
                if pos != text.len() {
                    return Err(self.syntax(start + pos, "trailing text after cup tree"));
                }
                Ok(ProtocolDecl::Cup(tree))
            }
            other => {
                let family: ProtocolFamily = other.parse().map_err(|_| {
                    self.err(name_col, ParseErrorKind::UnknownProtocol(other.to_string()))
                })?;
                if let Some(&(c, _)) = params.first() {
                    return Err(self.syntax(c, format!("{other} takes no parameters")));
                }
                Ok(ProtocolDecl::Named(family))
            }
        }
    }

    /// `start` is the column of `text[0]`; columns inside the tree are
    /// approximate when the tree was written with spaces.
    fn tree(&self, start: usize, text: &[u8], pos: &mut usize) -> Result<CupTree, ParseError> {
        if text.get(*pos) == Some(&b'(') {
            *pos += 1;
            let left = self.tree(start, text, pos)?;
            if text.get(*pos) != Some(&b',') {
                return Err(self.syntax(start + *pos, "expected ',' in cup tree"));
            }
            *pos += 1;
            let right = self.tree(start, text, pos)?;
            if text.get(*pos) != Some(&b')') {
                return Err(self.syntax(start + *pos, "expected ')' in cup tree"));
            }
            *pos += 1;
            return Ok(CupTree::pair(left, right));
        }
        let begin = *pos;
        while *pos < text.len() && (text[*pos].is_ascii_alphanumeric() || text[*pos] == b'_') {
            *pos += 1;
        }
        if begin == *pos {
            return Err(self.syntax(start + begin, "expected a label or '(' in cup tree"));
        }
        let label = std::str::from_utf8(&text[begin..*pos]).expect("ascii");
        Ok(CupTree::Leaf(self.resolve(start + begin, label)?))
    }

    fn ballot(&mut self, raw: &str, offset: usize) -> Result<(), ParseError> {
        let m = match &self.labels {
            Some(l) => l.len(),
            None => return Err(self.syntax(1, "CANDIDATES must come first")),
        };
        let Some((weight_text, rest)) = raw.split_once(':') else {
            return Err(self.syntax(offset + 1, "ballot lines look like `weight: a,b,c`"));
        };
        let weight_col = offset + 1 + (weight_text.len() - weight_text.trim_start().len());
        let weight: u64 = match weight_text.trim().parse() {
            Ok(w) if w > 0 => w,
            _ => {
                return Err(self.err(
                    weight_col,
                    ParseErrorKind::BadWeight(weight_text.trim().to_string()),
                ))
            }
        };
        let mut col = offset + weight_text.len() + 2;
        let mut order = Vec::new();
        for part in rest.split(',') {
            let label_col = col + (part.len() - part.trim_start().len());
            let label = part.trim();
            if label.is_empty() {
                return Err(self.syntax(label_col, "empty label in ballot"));
            }
            order.push(self.resolve(label_col, label)?);
            col += part.len() + 1;
        }
        let ballot = WeightedBallot::new(order, weight);
        validate_profile(m, vec![ballot.clone()])
            .map_err(|e| self.err(offset + 1, ParseErrorKind::Invalid(e.to_string())))?;
        self.ballots.push(ballot);
        Ok(())
    }

    fn setting(&mut self, toks: &[(usize, &str)]) -> Result<(), ParseError> {
        let (col, key) = toks[0];
        let rest = &toks[1..];
        match key {
            "weights" => {
                if self.weights.is_some() {
                    return Err(self.syntax(col, "weights given twice"));
                }
                let w = rest
                    .iter()
                    .map(|&(c, v)| match v.parse::<u64>() {
                        Ok(w) if w > 0 => Ok(w),
                        _ => Err(self.err(c, ParseErrorKind::BadWeight(v.to_string()))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                self.weights = Some(w);
            }
            "goal" => {
                if self.goal.is_some() {
                    return Err(self.syntax(col, "goal given twice"));
                }
                let [(kc, kind), (lc, label)] = rest else {
                    return Err(self.syntax(col, "goal looks like `goal constructive p`"));
                };
                let c = self.resolve(*lc, label)?;
                self.goal = Some(match *kind {
                    "constructive" => Goal::Constructive(c),
                    "destructive" => Goal::Destructive(c),
                    _ => return Err(self.syntax(*kc, "goal kind is constructive or destructive")),
                });
            }
            "threshold" => {
                if self.threshold.is_some() {
                    return Err(self.syntax(col, "threshold given twice"));
                }
                let [(c, text)] = rest else {
                    return Err(self.syntax(col, "threshold looks like `threshold 1/4`"));
                };
                let r: Ratio<u64> = text
                    .parse()
                    .map_err(|_| self.syntax(*c, format!("{text:?} is not a fraction num/den")))?;
                self.threshold = Some(r);
            }
            other => return Err(self.syntax(col, format!("unknown setting {other:?}"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<ElectionDocument, ParseError> {
        let at = |line: usize, kind| ParseError {
            line,
            column: 1,
            kind,
        };
        let labels = self
            .labels
            .ok_or_else(|| at(self.line, ParseErrorKind::MissingSection("CANDIDATES")))?;
        let m = labels.len();
        let (protocol_line, protocol) = self
            .protocol
            .ok_or_else(|| at(self.line, ParseErrorKind::MissingSection("PROTOCOL")))?;
        let spec = protocol
            .spec(m)
            .map_err(|e| at(protocol_line, ParseErrorKind::Invalid(e)))?;
        spec.validate(m)
            .map_err(|e| at(protocol_line, ParseErrorKind::Invalid(e.to_string())))?;
        let (tb_line, tie_break) = self.tie_break.unwrap_or((0, TieBreak::Pessimistic));
        tie_break
            .validate(m)
            .map_err(|e| at(tb_line, ParseErrorKind::Invalid(e.to_string())))?;
        let profile = Profile::new(m, self.ballots)
            .map_err(|e| at(self.line, ParseErrorKind::Invalid(e.to_string())))?;
        let manipulation = match self.manipulation {
            None => None,
            Some(line) => {
                let goal = self.goal.ok_or_else(|| {
                    at(
                        line,
                        ParseErrorKind::Invalid("MANIPULATION needs a goal".into()),
                    )
                })?;
                let decl = ManipulationDecl {
                    weights: self.weights.unwrap_or_default(),
                    goal,
                    threshold: self.threshold,
                };
                ManipulationInstance::new(
                    profile.clone(),
                    decl.weights.clone(),
                    goal,
                    spec,
                    tie_break.clone(),
                    decl.threshold,
                )
                .map_err(|e| at(line, ParseErrorKind::Invalid(e.to_string())))?;
                Some(decl)
            }
        };
        Ok(ElectionDocument {
            version: self.version.unwrap_or(FORMAT_VERSION),
            labels,
            protocol,
            tie_break,
            ballots: profile.into_ballots(),
            manipulation,
        })
    }
}

pub fn parse_election(text: &str) -> Result<ElectionDocument, ParseError> {
    let mut p = Parser {
        line: 0,
        labels: None,
        index: HashMap::new(),
        version: None,
        protocol: None,
        tie_break: None,
        ballots: Vec::new(),
        ballots_seen: false,
        manipulation: None,
        weights: None,
        goal: None,
        threshold: None,
    };
    let mut block = Block::Top;
    for (n, raw) in text.lines().enumerate() {
        p.line = n + 1;
        let content = strip_comment(raw);
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        if let Some(next) = p.directive(&toks)? {
            block = next;
            continue;
        }
        match block {
            Block::Ballots => p.ballot(content, 0)?,
            Block::Manipulation => p.setting(&toks)?,
            Block::Top => {
                return Err(p.syntax(
                    toks[0].0,
                    format!("unexpected {:?} outside a section", toks[0].1),
                ));
            }
        }
    }
    p.line = text.lines().count().max(1);
    p.finish()
}

pub fn serialize_election(doc: &ElectionDocument) -> String {
    let mut out = String::new();
    let label = |c: Candidate| doc.labels[c].clone();
    writeln!(out, "VERSION {}", doc.version).unwrap();
    writeln!(out, "CANDIDATES {}", doc.labels.join(" ")).unwrap();
    let protocol = match &doc.protocol {
        ProtocolDecl::Named(family) => family.name().to_string(),
        ProtocolDecl::Scoring(alpha) => {
            let values: Vec<String> = alpha.iter().map(i64::to_string).collect();
            format!("scoring {}", values.join(" "))
        }
        ProtocolDecl::Cup(tree) => format!("cup {}", tree.render(&label)),
    };
    writeln!(out, "PROTOCOL {protocol}").unwrap();
    let tb = match &doc.tie_break {
        TieBreak::Pessimistic => "pessimistic".to_string(),
        TieBreak::Optimistic => "optimistic".to_string(),
        TieBreak::Lexicographic(order) => {
            let names: Vec<String> = order.iter().map(|&c| label(c)).collect();
            format!("lexicographic {}", names.join(" "))
        }
    };
    writeln!(out, "TIEBREAK {tb}").unwrap();
    writeln!(out, "BALLOTS").unwrap();
    for b in &doc.ballots {
        writeln!(out, "{}: {}", b.weight, doc.render_ballot(&b.order)).unwrap();
    }
    if let Some(m) = &doc.manipulation {
        writeln!(out, "MANIPULATION").unwrap();
        let weights: Vec<String> = m.weights.iter().map(u64::to_string).collect();
        writeln!(
            out,
            "{}",
            format!("weights {}", weights.join(" ")).trim_end()
        )
        .unwrap();
        writeln!(out, "goal {} {}", m.goal.kind(), label(m.goal.candidate())).unwrap();
        if let Some(r) = m.threshold {
            writeln!(out, "threshold {}/{}", r.numer(), r.denom()).unwrap();
        }
    }
    out
}

/// Canonical text layout: comments and blank lines dropped, runs of
/// whitespace collapsed, no spaces around `,`, after `(` or before `)`, and exactly one
/// space after a ballot's `:`. A document written with every section
/// explicit satisfies `serialize(parse(d)) == normalize(d)`.
pub fn normalize(text: &str) -> String {
    let mut out = String::new();
    for raw in text.lines() {
        let words: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let mut line = words.join(" ");
        for (from, to) in [(" ,", ","), (", ", ","), ("( ", "("), (" )", ")")] {
            line = line.replace(from, to);
        }
        if let Some((w, rest)) = line.split_once(':') {
            line = format!("{}: {}", w.trim_end(), rest.trim_start());
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Witness files: one ranking per line, labels separated by commas, in the
/// order of the coalition's weights. Lines before a `WITNESS` marker are
/// ignored when the marker is present, so `solve` output can be fed back.
pub fn parse_witness(
    text: &str,
    doc: &ElectionDocument,
) -> Result<Vec<Vec<Candidate>>, ParseError> {
    let index: HashMap<&str, Candidate> = doc
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, strip_comment(l)))
        .collect();
    let start = lines
        .iter()
        .position(|(_, l)| l.trim() == "WITNESS")
        .map_or(0, |i| i + 1);
    let mut out = Vec::new();
    for &(line, content) in &lines[start..] {
        if content.trim().is_empty() {
            continue;
        }
        let mut col = 1;
        let mut order = Vec::new();
        for part in content.split(',') {
            let label_col = col + (part.len() - part.trim_start().len());
            let c = index.get(part.trim()).copied().ok_or_else(|| ParseError {
                line,
                column: label_col,
                kind: ParseErrorKind::UnknownLabel(part.trim().to_string()),
            })?;
            order.push(c);
            col += part.len() + 1;
        }
        out.push(order);
    }
    Ok(out)
}

pub fn serialize_witness(witness: &[Vec<Candidate>], doc: &ElectionDocument) -> String {
    witness
        .iter()
        .map(|o| doc.render_ballot(o) + "\n")
        .collect()
}
