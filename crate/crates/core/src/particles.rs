//! Domain filtering of space-time diagrams and a census of the boundaries
//! left behind.
//!
//! A regular domain is a `p x tau` binary tile. At time `t` a cell matches a
//! domain at spatial phase `s` when it equals `tile[t mod tau][(x + s) mod p]`.
//! Maximal cyclic runs of matching cells at least `min_run` long claim their
//! interior cells (the two end cells touch foreign material and stay
//! unclaimed). Overlapping claims go to the longest run, then to the earlier
//! catalog entry. Whatever is left unclaimed is boundary.

use std::fmt;

use crate::engine::Trajectory;
use crate::error::{domain, Error, LineError, Result};
use crate::lattice::Lattice;
use crate::rule::RADIUS;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    /// `temporal_period` rows of `spatial_period` cells.
    pub tile: Vec<Vec<bool>>,
    pub min_run: usize,
}

impl Domain {
    pub fn new(name: impl Into<String>, tile: Vec<Vec<bool>>, min_run: usize) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(domain("domain name is empty"));
        }
        let p = tile.first().map_or(0, Vec::len);
        if p == 0 {
            return Err(domain(format!("domain {name}: empty tile")));
        }
        if tile.iter().any(|row| row.len() != p) {
            return Err(domain(format!("domain {name}: tile rows differ in length")));
        }
        if min_run < p {
            return Err(domain(format!(
                "domain {name}: minimum run {min_run} shorter than period {p}"
            )));
        }
        Ok(Domain { name, tile, min_run })
    }

    /// Tile given as strings of `0`/`1`, one per time phase.
    pub fn from_rows(name: &str, rows: &[&str], min_run: usize) -> Result<Self> {
        let tile = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(domain(format!("domain {name}: bad tile cell {c:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Domain::new(name, tile, min_run)
    }

    pub fn spatial_period(&self) -> usize {
        self.tile[0].len()
    }

    pub fn temporal_period(&self) -> usize {
        self.tile.len()
    }

    /// Character used for this domain in text grids.
    pub fn initial(&self) -> char {
        self.name.chars().next().expect("name is non-empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainCatalog {
    pub domains: Vec<Domain>,
}

/// Default minimum run: one full neighborhood.
pub const DEFAULT_MIN_RUN: usize = 2 * RADIUS + 1;

impl DomainCatalog {
    pub fn new(domains: Vec<Domain>) -> Result<Self> {
        if domains.is_empty() {
            return Err(domain("domain catalog is empty"));
        }
        if domains.len() > u16::MAX as usize {
            return Err(domain("too many domains"));
        }
        Ok(DomainCatalog { domains })
    }

    /// All-0, all-1 and the checkerboard, minimum run `min_run`.
    pub fn density_default(min_run: usize) -> Self {
        DomainCatalog::new(vec![
            Domain::from_rows("0", &["0"], min_run).expect("valid tile"),
            Domain::from_rows("1", &["1"], min_run).expect("valid tile"),
            Domain::from_rows("checker", &["01", "10"], min_run).expect("valid tile"),
        ])
        .expect("non-empty")
    }

    /// Parses lines of `name p tau L row...` (`tau` rows of `p` digits).
    /// Blank lines and `#` comments are skipped; all bad lines are reported.
    pub fn parse(text: &str) -> Result<Self> {
        let mut domains = Vec::new();
        let mut errors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_domain_line(line) {
                Ok(d) => domains.push(d),
                Err(message) => errors.push(LineError { line: i + 1, message }),
            }
        }
        if !errors.is_empty() {
            return Err(Error::Catalog(errors));
        }
        if domains.is_empty() {
            return Err(Error::Catalog(vec![LineError {
                line: 0,
                message: "no domains defined".into(),
            }]));
        }
        DomainCatalog::new(domains)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.domains {
            out.push_str(&format!(
                "{} {} {} {}",
                d.name,
                d.spatial_period(),
                d.temporal_period(),
                d.min_run
            ));
            for row in &d.tile {
                out.push(' ');
                out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            }
            out.push('\n');
        }
        out
    }
}

fn parse_domain_line(line: &str) -> std::result::Result<Domain, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 5 {
        return Err(format!("expected `name p tau L row...`, found {} fields", fields.len()));
    }
    let num = |i: usize, what: &str| {
        fields[i]
            .parse::<usize>()
            .map_err(|_| format!("bad {what} {:?}", fields[i]))
    };
    let p = num(1, "spatial period")?;
    let tau = num(2, "temporal period")?;
    let min_run = num(3, "minimum run")?;
    if p == 0 || tau == 0 {
        return Err("periods must be positive".into());
    }
    let rows = &fields[4..];
    if rows.len() != tau {
        return Err(format!("expected {tau} tile rows, found {}", rows.len()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != p) {
        return Err(format!("tile row {r:?} is not {p} cells"));
    }
    Domain::from_rows(fields[0], rows, min_run).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    /// Index into the catalog.
    Domain(u16),
    Boundary,
}

/// A label for every site of a space-time diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredDiagram {
    width: usize,
    rows: usize,
    names: Vec<String>,
    initials: Vec<char>,
    labels: Vec<Label>,
}

impl FilteredDiagram {
    /// Builds a diagram from an explicit label grid.
    pub fn from_labels(names: Vec<String>, width: usize, labels: Vec<Label>) -> Result<Self> {
        if width == 0 || labels.len() % width != 0 {
            return Err(domain("label grid is not rectangular"));
        }
        if labels
            .iter()
            .any(|l| matches!(l, Label::Domain(d) if *d as usize >= names.len()))
        {
            return Err(domain("label refers to an unknown domain"));
        }
        let initials = names.iter().map(|n| n.chars().next().unwrap_or('?')).collect();
        Ok(FilteredDiagram {
            width,
            rows: labels.len() / width,
            names,
            initials,
            labels,
        })
    }

    /// Diagram from a text grid where `*` marks boundary and any other
    /// character a site of the domain with that initial.
    pub fn from_text_grid(names: Vec<String>, grid: &str) -> Result<Self> {
        let rows: Vec<&str> = grid.lines().filter(|l| !l.is_empty()).collect();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut labels = Vec::new();
        for row in &rows {
            if row.chars().count() != width {
                return Err(domain("text grid rows differ in width"));
            }
            for c in row.chars() {
                if c == '*' {
                    labels.push(Label::Boundary);
                } else {
                    let d = names
                        .iter()
                        .position(|n| n.starts_with(c))
                        .ok_or_else(|| domain(format!("no domain with initial {c:?}")))?;
                    labels.push(Label::Domain(d as u16));
                }
            }
        }
        FilteredDiagram::from_labels(names, width, labels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, t: usize, x: usize) -> Label {
        self.labels[t * self.width + x]
    }

    pub fn row(&self, t: usize) -> &[Label] {
        &self.labels[t * self.width..(t + 1) * self.width]
    }

    pub fn boundary_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::Boundary).count()
    }

    pub fn domain_count(&self) -> usize {
        self.labels.len() - self.boundary_count()
    }

    /// Boundary share of the sites in rows `from..`; zero if there are none.
    pub fn boundary_fraction_from(&self, from: usize) -> f64 {
        if from >= self.rows {
            return 0.0;
        }
        let sites = &self.labels[from * self.width..];
        sites.iter().filter(|&&l| l == Label::Boundary).count() as f64 / sites.len() as f64
    }

    pub fn boundary_mask(&self, t: usize) -> Vec<bool> {
        self.row(t).iter().map(|&l| l == Label::Boundary).collect()
    }

    /// One line per row: the domain's initial, or `*` for boundary.
    pub fn to_text_grid(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.width + 1));
        for t in 0..self.rows {
            for &l in self.row(t) {
                out.push(match l {
                    Label::Boundary => '*',
                    Label::Domain(d) => self.initials[d as usize],
                });
            }
            out.push('\n');
        }
        out
    }

    /// Maximal cyclic runs of boundary sites in row `t`.
    pub fn segments(&self, t: usize) -> Vec<Segment> {
        segments_of(&self.boundary_mask(t))
    }
}

pub fn label_sites(trajectory: &Trajectory, catalog: &DomainCatalog) -> Result<FilteredDiagram> {
    label_rows(&trajectory.states, catalog)
}

/// Labels a diagram given as its rows; row `i` is time step `i`.
pub fn label_rows(rows: &[Lattice], catalog: &DomainCatalog) -> Result<FilteredDiagram> {
    if catalog.domains.is_empty() {
        return Err(domain("domain catalog is empty"));
    }
    let width = rows.first().map_or(0, Lattice::len);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(domain("diagram rows must be non-empty and equally wide"));
    }
    let mut labels = Vec::with_capacity(width * rows.len());
    for (t, row) in rows.iter().enumerate() {
        labels.extend(label_row(&row.to_bools(), t, catalog));
    }
    FilteredDiagram::from_labels(
        catalog.domains.iter().map(|d| d.name.clone()).collect(),
        width,
        labels,
    )
}

fn label_row(cells: &[bool], t: usize, catalog: &DomainCatalog) -> Vec<Label> {
    let n = cells.len();
    // (run length, domain) of the best claim so far; length 0 means none
    let mut best: Vec<(usize, usize)> = vec![(0, 0); n];
    let mut claim = |x: usize, len: usize, d: usize| {
        let (bl, bd) = best[x];
        if len > bl || (len == bl && d < bd) {
            best[x] = (len, d);
        }
    };
    // The ring is unrolled twice so a run crossing the seam keeps its phase
    // instead of restarting it, which matters when p does not divide n.
    let mut matches = vec![false; 2 * n];
    for (d, dom) in catalog.domains.iter().enumerate() {
        let tile_row = &dom.tile[t % dom.temporal_period()];
        let p = tile_row.len();
        for phase in 0..p {
            for (i, m) in matches.iter_mut().enumerate() {
                *m = cells[i % n] == tile_row[(i + phase) % p];
            }
            let mut i = 0;
            while i < 2 * n {
                if !matches[i] {
                    i += 1;
                    continue;
                }
                let s = i;
                while i < 2 * n && matches[i] {
                    i += 1;
                }
                let len = i - s;
                if len >= n {
                    if n >= dom.min_run {
                        (0..n).for_each(|x| claim(x, n, d));
                    }
                } else if s > 0 && i < 2 * n && len >= dom.min_run {
                    // only runs bounded on both sides; each cyclic run has
                    // such a copy in one of the two windows
                    for j in s + 1..i - 1 {
                        claim(j % n, len, d);
                    }
                }
            }
        }
    }
    best.into_iter()
        .map(|(len, d)| {
            if len == 0 {
                Label::Boundary
            } else {
                Label::Domain(d as u16)
            }
        })
        .collect()
}

/// A cyclic run of cells `start, start+1, ..` of length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.start, self.len)
    }
}

fn segments_of(mask: &[bool]) -> Vec<Segment> {
    let n = mask.len();
    let Some(gap) = mask.iter().position(|&b| !b) else {
        return if n == 0 { vec![] } else { vec![Segment { start: 0, len: n }] };
    };
    let mut out = Vec::new();
    let mut start = None;
    for i in 1..=n {
        let x = (gap + i) % n;
        match (mask[x], start) {
            (true, None) => start = Some(x),
            (false, Some(s)) => {
                out.push(Segment {
                    start: s,
                    len: (x + n - s) % n,
                });
                start = None;
            }
            _ => {}
        }
    }
    out.sort_by_key(|s| s.start);
    out
}

fn contains(seg: Segment, x: usize, n: usize) -> bool {
    (x + n - seg.start) % n < seg.len
}

/// Whether two segments overlap or are separated by fewer than `reach` cells.
fn touching(a: Segment, b: Segment, n: usize, reach: usize) -> bool {
    if contains(a, b.start, n) || contains(b, a.start, n) {
        return true;
    }
    let after_a = (b.start + n - (a.start + a.len) % n) % n;
    let after_b = (a.start + n - (b.start + b.len) % n) % n;
    after_a.min(after_b) < reach
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Appear,
    Annihilate,
    Merge,
    Split,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Appear => "appear",
            EventKind::Annihilate => "annihilate",
            EventKind::Merge => "merge",
            EventKind::Split => "split",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleEvent {
    /// Row at which the new segment configuration is first seen.
    pub time: usize,
    pub kind: EventKind,
    pub before: Vec<Segment>,
    pub after: Vec<Segment>,
}

impl ParticleEvent {
    pub const LOG_HEADER: &'static str = "time,kind,before,after";

    pub fn log_line(&self) -> String {
        let join = |s: &[Segment]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
        format!("{},{},{},{}", self.time, self.kind, join(&self.before), join(&self.after))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    /// Boundary segments in each row.
    pub counts: Vec<usize>,
    pub events: Vec<ParticleEvent>,
}

/// Census with segments matched within one neighborhood radius.
pub fn census(diagram: &FilteredDiagram) -> Census {
    census_with_reach(diagram, RADIUS)
}

/// Tracks boundary segments row to row. Segments are linked when they
/// overlap or come within `reach` cells of each other (across rows, or
/// within a row when colliding). At rows where the total count changes,
/// each linked group whose size changes yields one event.
pub fn census_with_reach(diagram: &FilteredDiagram, reach: usize) -> Census {
    let n = diagram.width();
    let rows: Vec<Vec<Segment>> = (0..diagram.rows()).map(|t| diagram.segments(t)).collect();
    let counts = rows.iter().map(Vec::len).collect();
    let mut events = Vec::new();
    for t in 1..rows.len() {
        let (prev, cur) = (&rows[t - 1], &rows[t]);
        if prev.len() == cur.len() {
            continue;
        }
        let all: Vec<Segment> = prev.iter().chain(cur).copied().collect();
        let mut groups = UnionFind::new(all.len());
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if touching(all[i], all[j], n, reach) {
                    groups.union(i, j);
                }
            }
        }
        let mut members: Vec<(usize, Vec<Segment>, Vec<Segment>)> = Vec::new();
        for (i, &seg) in all.iter().enumerate() {
            let root = groups.find(i);
            let slot = match members.iter().position(|m| m.0 == root) {
                Some(p) => p,
                None => {
                    members.push((root, Vec::new(), Vec::new()));
                    members.len() - 1
                }
            };
            if i < prev.len() {
                members[slot].1.push(seg);
            } else {
                members[slot].2.push(seg);
            }
        }
        for (_, before, after) in members {
            let kind = match (before.len(), after.len()) {
                (b, a) if b == a => continue,
                (0, _) => EventKind::Appear,
                (_, 0) => EventKind::Annihilate,
                (b, a) if b > a => EventKind::Merge,
                _ => EventKind::Split,
            };
            events.push(ParticleEvent {
                time: t,
                kind,
                before,
                after,
            });
        }
    }
    Census { counts, events }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_one(min_run: usize) -> DomainCatalog {
        DomainCatalog::new(vec![
            Domain::from_rows("0", &["0"], min_run).unwrap(),
            Domain::from_rows("1", &["1"], min_run).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn all_off_has_no_boundary() {
        let rows = vec![Lattice::zeros(20); 5];
        let fd = label_rows(&rows, &DomainCatalog::density_default(7)).unwrap();
        assert_eq!(fd.boundary_count(), 0);
        assert!(census(&fd).events.is_empty());
    }

    #[test]
    fn two_seams_on_a_ring() {
        let row: Lattice = "0000000011111111".parse().unwrap();
        let fd = label_rows(&[row], &zero_one(4)).unwrap();
        assert_eq!(fd.segments(0), vec![Segment { start: 7, len: 2 }, Segment { start: 15, len: 2 }]);
        assert_eq!(fd.segments(0).len(), 2);
        assert_eq!(fd.to_text_grid(), "*000000**111111*\n");
    }

    #[test]
    fn checkerboard_meets_zeros_with_one_cell_boundary() {
        let row: Lattice = "00000000000101010101".parse().unwrap();
        let fd = label_rows(&[row], &DomainCatalog::density_default(7)).unwrap();
        assert_eq!(fd.to_text_grid(), "*000000000*ccccccccc\n");
    }

    #[test]
    fn short_runs_are_boundary() {
        let row: Lattice = "000000011000000".parse().unwrap();
        let fd = label_rows(&[row], &zero_one(4)).unwrap();
        assert_eq!(fd.to_text_grid(), "000000****00000\n");
    }

    #[test]
    fn checkerboard_phase_follows_time() {
        let cat = DomainCatalog::new(vec![Domain::from_rows("a", &["0011", "1100"], 4).unwrap()]).unwrap();
        let rows = vec!["00110011".parse().unwrap(), "11001100".parse().unwrap()];
        let fd = label_rows(&rows, &cat).unwrap();
        assert_eq!(fd.boundary_count(), 0);
    }

    #[test]
    fn empty_catalog_rejected() {
        assert!(DomainCatalog::new(vec![]).is_err());
        assert!(DomainCatalog::parse("# nothing\n").is_err());
    }

    #[test]
    fn catalog_text_round_trip() {
        let cat = DomainCatalog::density_default(7);
        assert_eq!(DomainCatalog::parse(&cat.to_text()).unwrap(), cat);
    }

    #[test]
    fn catalog_errors_carry_lines() {
        let text = "0 1 1 7 0\nbad 2 1 7 011\n# c\nx 1 2 7 0\n";
        match DomainCatalog::parse(text) {
            Err(Error::Catalog(errs)) => {
                assert_eq!(errs.iter().map(|e| e.line).collect::<Vec<_>>(), vec![2, 4]);
            }
            other => panic!("{other:?}"),
        }
        assert!(DomainCatalog::parse("z 2 1 1 01\n").is_err());
    }

    #[test]
    fn segments_wrap_around() {
        let mask = [true, false, false, true, true];
        assert_eq!(segments_of(&mask), vec![Segment { start: 3, len: 3 }]);
        assert_eq!(segments_of(&[true; 4]), vec![Segment { start: 0, len: 4 }]);
        assert!(segments_of(&[false; 4]).is_empty());
    }

    #[test]
    fn touching_is_cyclic() {
        let a = Segment { start: 18, len: 2 };
        let b = Segment { start: 1, len: 2 };
        assert!(touching(a, b, 20, 2));
        assert!(!touching(a, b, 20, 1));
        assert!(touching(a, Segment { start: 19, len: 1 }, 20, 0));
    }

    #[test]
    fn appear_and_split_events() {
        let names = vec!["0".to_string(), "1".to_string()];
        let grid = "00000000000000000000\n00000000**0000000000\n000000**0000**000000\n";
        let fd = FilteredDiagram::from_text_grid(names, grid).unwrap();
        let c = census_with_reach(&fd, 3);
        assert_eq!(c.counts, vec![0, 1, 2]);
        let kinds: Vec<EventKind> = c.events.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EventKind::Appear, EventKind::Split]);
        assert_eq!(c.events[1].log_line(), "2,split,8+2,6+2;12+2");
    }
}
