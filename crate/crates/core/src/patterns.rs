//! Shift-pattern families and their expansion into shift schedules.
//!
//! A pattern is an availability vector over consecutive TPs with cells in
//! {0, 0.5, 1}. Families are produced by enumerating every break placement
//! allowed by a [`PatternRuleSet`]; the built-in presets carry their own rule
//! sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::horizon::{Horizon, PeriodVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid rule set: {0}")]
    InvalidRules(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("family {0} needs an explicit rule set")]
    MissingRules(String),
    #[error("unknown pattern family {0:?}")]
    UnknownFamily(String),
}

/// One TP of a shift: off (0), half available (0.5) or working (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Off,
    Half,
    Work,
}

impl Cell {
    /// Availability in half units: 0, 1 or 2.
    pub fn halves(self) -> i64 {
        match self {
            Cell::Off => 0,
            Cell::Half => 1,
            Cell::Work => 2,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.halves() as f64 / 2.0
    }

    pub fn from_f64(v: f64) -> Option<Cell> {
        if v == 0.0 {
            Some(Cell::Off)
        } else if v == 0.5 {
            Some(Cell::Half)
        } else if v == 1.0 {
            Some(Cell::Work)
        } else {
            None
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Off => serializer.serialize_u8(0),
            Cell::Half => serializer.serialize_f64(0.5),
            Cell::Work => serializer.serialize_u8(1),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(deserializer)?;
        Cell::from_f64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("cell value {v} not in {{0, 0.5, 1}}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BreakKind {
    Lunch,
    Tea,
    Relief,
}

/// Where a break sits inside a pattern (1-based position, span in TPs).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BreakInfo {
    pub kind: BreakKind,
    pub position: usize,
    pub span: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftPattern {
    cells: Vec<Cell>,
    #[serde(default)]
    breaks: Vec<BreakInfo>,
}

#[derive(Deserialize)]
struct RawPattern {
    cells: Vec<Cell>,
    #[serde(default)]
    breaks: Vec<BreakInfo>,
}

impl<'de> Deserialize<'de> for ShiftPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawPattern::deserialize(deserializer)?;
        ShiftPattern::with_breaks(raw.cells, raw.breaks).map_err(serde::de::Error::custom)
    }
}

impl ShiftPattern {
    pub fn new(cells: Vec<Cell>) -> Result<Self, PatternError> {
        Self::with_breaks(cells, Vec::new())
    }

    pub fn with_breaks(cells: Vec<Cell>, breaks: Vec<BreakInfo>) -> Result<Self, PatternError> {
        if cells.is_empty() {
            return Err(PatternError::InvalidPattern("empty pattern".into()));
        }
        if cells[0] != Cell::Work || cells[cells.len() - 1] != Cell::Work {
            return Err(PatternError::InvalidPattern(
                "a shift must start and end with a working TP".into(),
            ));
        }
        for b in &breaks {
            if b.span == 0 || b.position == 0 || b.position + b.span - 1 > cells.len() {
                return Err(PatternError::InvalidPattern(format!(
                    "break at {} (span {}) lies outside the pattern",
                    b.position, b.span
                )));
            }
        }
        Ok(Self { cells, breaks })
    }

    /// Builds a pattern from numeric cells, e.g. `&[1.0, 0.5, 1.0]`.
    pub fn from_values(values: &[f64]) -> Result<Self, PatternError> {
        let cells = values
            .iter()
            .map(|&v| {
                Cell::from_f64(v)
                    .ok_or_else(|| PatternError::InvalidPattern(format!("bad cell value {v}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cells)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn breaks(&self) -> &[BreakInfo] {
        &self.breaks
    }

    /// Total availability in half units (twice the worked TPs).
    pub fn availability_halves(&self) -> i64 {
        self.cells.iter().map(|c| c.halves()).sum()
    }

    /// Smallest positive cell value in half units (1 if the pattern has
    /// half cells, else 2).
    pub fn min_positive_halves(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| c.halves())
            .filter(|&h| h > 0)
            .min()
            .unwrap_or(2)
    }

    pub fn values(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.as_f64()).collect()
    }

    /// Human-readable rendering such as `11110011110.5...`.
    pub fn describe(&self, omega: u32) -> String {
        let minutes = self.len() as u32 * omega;
        let mut s = format!("{}h{:02} ", minutes / 60, minutes % 60);
        for c in &self.cells {
            s.push(match c {
                Cell::Off => '0',
                Cell::Half => 'h',
                Cell::Work => '1',
            });
        }
        s
    }
}

impl fmt::Display for ShiftPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cells
            .iter()
            .map(|c| match c {
                Cell::Off => "0".to_string(),
                Cell::Half => "0.5".to_string(),
                Cell::Work => "1".to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A pattern anchored at a start TP of the horizon. `pattern` indexes the
/// pattern set (0-based); `start` is a 1-based TP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShiftSchedule {
    pub pattern: usize,
    pub start: usize,
}

/// Required breaks of one kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakSpec {
    pub kind: BreakKind,
    pub count: usize,
    /// Span in TPs.
    pub span: usize,
    /// Availability of the break cells: `Off` or `Half`.
    pub value: Cell,
}

/// How the minimum gap between successive breaks is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GapRule {
    /// No gap requirement.
    None,
    /// Every break cell counts as a whole TP; the work between two breaks
    /// must last at least `min_minutes`.
    WholePeriods { min_minutes: u32 },
    /// Half-TP breaks occupy half of their TP: the earliest one sits in the
    /// first half, every later one in the last half.
    FootnoteHalves { min_minutes: u32 },
    /// Each half-TP break may independently sit in either half of its TP; a
    /// placement is admissible if some choice of halves meets the gap.
    IndependentHalves { min_minutes: u32 },
    /// Minimum number of whole working TPs between successive breaks,
    /// chosen by whether each side is a full-TP (`Off`) or half-TP break.
    PerTransition {
        full_to_full: usize,
        full_to_half: usize,
        half_to_full: usize,
        half_to_half: usize,
    },
}

/// How breaks are positioned inside a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakLayout {
    /// Every admissible placement yields a pattern.
    Enumerate,
    /// One pattern per length. The first break spec (count 1) is centred at
    /// `ceil(m/2)`; a following spec with count 2 is centred in the segments
    /// left and right of it.
    Centered,
}

/// Admissible daily starts, 1-based TPs within a day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyWindow {
    pub first_start: usize,
    pub last_start: usize,
    /// Latest TP of the day in which a shift may still be working.
    #[serde(default)]
    pub latest_end: Option<usize>,
}

impl DailyWindow {
    pub fn any(day_length: usize) -> Self {
        Self {
            first_start: 1,
            last_start: day_length,
            latest_end: None,
        }
    }

    pub fn admits(&self, start: usize, len: usize) -> bool {
        start >= self.first_start
            && start <= self.last_start
            && self.latest_end.map_or(true, |e| start + len - 1 <= e)
    }
}

/// Rules that define one family (or one length tier of a family).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRuleSet {
    pub omega: u32,
    pub sl_min: usize,
    pub sl_max: usize,
    #[serde(default)]
    pub breaks: Vec<BreakSpec>,
    /// Minimum working TPs before the first break.
    #[serde(default = "one")]
    pub head_protect: usize,
    /// Minimum working TPs after the last break.
    #[serde(default = "one")]
    pub tail_protect: usize,
    #[serde(default = "no_gap")]
    pub gap: GapRule,
    #[serde(default = "enumerate_layout")]
    pub layout: BreakLayout,
    #[serde(default)]
    pub start_window: Option<DailyWindow>,
}

fn one() -> usize {
    1
}

fn no_gap() -> GapRule {
    GapRule::None
}

fn enumerate_layout() -> BreakLayout {
    BreakLayout::Enumerate
}

impl PatternRuleSet {
    pub fn validate(&self) -> Result<(), PatternError> {
        let bad = |m: &str| Err(PatternError::InvalidRules(m.to_string()));
        if self.sl_min == 0 {
            return bad("sl_min must be at least 1");
        }
        if self.sl_min > self.sl_max {
            return bad("sl_min exceeds sl_max");
        }
        if self.omega == 0 {
            return bad("omega must be positive");
        }
        for b in &self.breaks {
            if b.span == 0 {
                return bad("break span must be at least 1");
            }
            if b.value == Cell::Work {
                return bad("break cells cannot be working cells");
            }
            if b.value == Cell::Half && b.span != 1 {
                return bad("half-TP breaks must span exactly one TP");
            }
        }
        if self.layout == BreakLayout::Centered {
            let counts: Vec<usize> = self.breaks.iter().map(|b| b.count).collect();
            if !(counts.is_empty() || counts == [1] || counts == [1, 2]) {
                return bad("centred layout supports one break, or one break flanked by a pair");
            }
        }
        Ok(())
    }
}

/// The built-in families plus user-defined rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// 9-hour shifts with two tea breaks and a one-hour lunch (30-min TPs).
    Fx260,
    /// Fifteen 3-10 h shifts with breaks by length tier (30-min TPs).
    Fl15,
    /// 3-10 h shifts with one 30-min break away from both ends (30-min TPs).
    Fl135,
    /// 3-10 h shifts without breaks (15-min TPs).
    Fx29,
    /// 3-10 h shifts without breaks restricted to 4:00-21:00 (30-min TPs).
    Day330,
    Custom,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Fx260 => "FX260",
            Family::Fl15 => "FL15",
            Family::Fl135 => "FL135",
            Family::Fx29 => "FX29",
            Family::Day330 => "DAY330",
            Family::Custom => "CUSTOM",
        }
    }

    pub fn parse(s: &str) -> Result<Family, PatternError> {
        match s.to_ascii_uppercase().as_str() {
            "FX260" => Ok(Family::Fx260),
            "FL15" => Ok(Family::Fl15),
            "FL135" => Ok(Family::Fl135),
            "FX29" | "FL29" => Ok(Family::Fx29),
            "DAY330" => Ok(Family::Day330),
            "CUSTOM" => Ok(Family::Custom),
            _ => Err(PatternError::UnknownFamily(s.to_string())),
        }
    }

    /// TP length the preset is defined for.
    pub fn omega(self) -> Option<u32> {
        match self {
            Family::Fx260 | Family::Fl15 | Family::Fl135 | Family::Day330 => Some(30),
            Family::Fx29 => Some(15),
            Family::Custom => None,
        }
    }

    /// Built-in rule sets (one per length tier). Empty for `Custom`.
    ///
    /// FX260 is a calibrated interpretation. Conditions: a 60-min lunch
    /// (two `Off` TPs), two 15-min teas (one `Half` TP each), no break in the
    /// first 90 minutes (`head_protect = 3`), the last TP worked, and a
    /// per-transition gap of at least 3 whole working TPs after the lunch, 2
    /// between the teas (15 + 60 + 15 minutes when the first tea takes the
    /// early half of its TP and the second the late half) and 1 before the
    /// lunch. This is the configuration the exhaustive count certifies at
    /// exactly 260 patterns while admitting the canonical
    /// `(1,1,1,1,0,0,1,1,1,1,0.5,1,1,0.5,1,1,1,1)`. The minute-based modes
    /// do not reach 260 for any gap between 0 and 180 minutes.
    pub fn rules(self) -> Vec<PatternRuleSet> {
        let plain = |omega, lo, hi| PatternRuleSet {
            omega,
            sl_min: lo,
            sl_max: hi,
            breaks: Vec::new(),
            head_protect: 1,
            tail_protect: 1,
            gap: GapRule::None,
            layout: BreakLayout::Enumerate,
            start_window: None,
        };
        match self {
            Family::Fx260 => vec![PatternRuleSet {
                breaks: vec![
                    BreakSpec {
                        kind: BreakKind::Lunch,
                        count: 1,
                        span: 2,
                        value: Cell::Off,
                    },
                    BreakSpec {
                        kind: BreakKind::Tea,
                        count: 2,
                        span: 1,
                        value: Cell::Half,
                    },
                ],
                head_protect: 3,
                tail_protect: 1,
                gap: fx260_gap(),
                ..plain(30, 18, 18)
            }],
            Family::Fl15 => {
                let relief = |count, value| BreakSpec {
                    kind: BreakKind::Relief,
                    count,
                    span: 1,
                    value,
                };
                let tier = |lo, hi, breaks| PatternRuleSet {
                    breaks,
                    layout: BreakLayout::Centered,
                    ..plain(30, lo, hi)
                };
                vec![
                    tier(6, 10, vec![]),
                    tier(11, 12, vec![relief(1, Cell::Half)]),
                    tier(13, 16, vec![relief(1, Cell::Off)]),
                    tier(
                        17,
                        20,
                        vec![relief(1, Cell::Off), relief(2, Cell::Half)],
                    ),
                ]
            }
            Family::Fl135 => vec![PatternRuleSet {
                breaks: vec![BreakSpec {
                    kind: BreakKind::Lunch,
                    count: 1,
                    span: 1,
                    value: Cell::Off,
                }],
                head_protect: 2,
                tail_protect: 2,
                ..plain(30, 6, 20)
            }],
            Family::Fx29 => vec![plain(15, 12, 40)],
            Family::Day330 => vec![PatternRuleSet {
                start_window: Some(DailyWindow {
                    first_start: 9,
                    last_start: 42,
                    latest_end: Some(42),
                }),
                ..plain(30, 6, 20)
            }],
            Family::Custom => Vec::new(),
        }
    }
}

/// The pinned FX260 gap configuration.
pub fn fx260_gap() -> GapRule {
    GapRule::PerTransition {
        full_to_full: 3,
        full_to_half: 3,
        half_to_full: 1,
        half_to_half: 2,
    }
}

/// A pattern family as exchanged in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSet {
    pub family: String,
    pub omega: u32,
    pub patterns: Vec<ShiftPattern>,
    /// Daily start restriction applied on every day of the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_window: Option<DailyWindow>,
}

impl PatternSet {
    pub fn preset(family: Family) -> Result<Self, PatternError> {
        let omega = family
            .omega()
            .ok_or_else(|| PatternError::MissingRules(family.id().to_string()))?;
        Ok(Self {
            family: family.id().to_string(),
            omega,
            patterns: generate_family(family, None)?,
            start_window: family.rules().iter().find_map(|r| r.start_window),
        })
    }

    /// Whether pattern `idx` may start at horizon TP `start`.
    pub fn admits_start(&self, idx: usize, start: usize, h: &Horizon) -> bool {
        match &self.start_window {
            None => true,
            Some(w) => {
                let ppd = h.periods_per_day();
                w.admits((start - 1) % ppd + 1, self.patterns[idx].len())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pattern sets always serialize")
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn get(&self, idx: usize) -> &ShiftPattern {
        &self.patterns[idx]
    }

    /// The supply footprint of a schedule over `h`.
    pub fn footprint(&self, s: ShiftSchedule, h: &Horizon) -> PeriodVector {
        pattern_supply_footprint(&self.patterns[s.pattern], s.start, h)
    }
}

/// All distinct patterns of a family, ordered shorter first and then
/// lexicographically on cells (`0 < 0.5 < 1`).
pub fn generate_family(
    family: Family,
    rules: Option<&[PatternRuleSet]>,
) -> Result<Vec<ShiftPattern>, PatternError> {
    let owned;
    let rules = match (family, rules) {
        (Family::Custom, None) => return Err(PatternError::MissingRules("CUSTOM".into())),
        (_, Some(r)) => r,
        (f, None) => {
            owned = f.rules();
            &owned[..]
        }
    };
    let mut all = BTreeSet::new();
    for r in rules {
        for p in generate(r)? {
            all.insert(SortKey(p));
        }
    }
    Ok(all.into_iter().map(|k| k.0).collect())
}

#[derive(PartialEq, Eq)]
struct SortKey(ShiftPattern);

impl Ord for SortKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0.cells).cmp(&(other.0.len(), &other.0.cells))
    }
}

impl PartialOrd for SortKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy)]
struct Block {
    kind: BreakKind,
    span: usize,
    value: Cell,
}

/// Enumerates every pattern admitted by one rule set.
pub fn generate(rules: &PatternRuleSet) -> Result<Vec<ShiftPattern>, PatternError> {
    rules.validate()?;
    let blocks: Vec<Block> = rules
        .breaks
        .iter()
        .flat_map(|b| {
            std::iter::repeat(Block {
                kind: b.kind,
                span: b.span,
                value: b.value,
            })
            .take(b.count)
        })
        .collect();

    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    for m in rules.sl_min..=rules.sl_max {
        let placements = match rules.layout {
            BreakLayout::Enumerate => enumerate_placements(&blocks, m),
            BreakLayout::Centered => centered_placement(&blocks, m).into_iter().collect(),
        };
        for placed in placements {
            if !admissible(rules, &placed, m) {
                continue;
            }
            let mut cells = vec![Cell::Work; m];
            let mut infos = Vec::with_capacity(placed.len());
            for &(pos, b) in &placed {
                for c in &mut cells[pos - 1..pos - 1 + b.span] {
                    *c = b.value;
                }
                infos.push(BreakInfo {
                    kind: b.kind,
                    position: pos,
                    span: b.span,
                });
            }
            if found.insert(cells.clone()) {
                out.push(ShiftPattern::with_breaks(cells, infos)?);
            }
        }
    }
    Ok(out)
}

/// Every non-overlapping placement of `blocks` in a pattern of length `m`,
/// each sorted by position.
fn enumerate_placements(blocks: &[Block], m: usize) -> Vec<Vec<(usize, Block)>> {
    fn rec(
        blocks: &[Block],
        m: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, Block)>,
        out: &mut Vec<Vec<(usize, Block)>>,
    ) {
        let Some((first, rest)) = blocks.split_first() else {
            let mut placed = cur.clone();
            placed.sort_by_key(|(p, _)| *p);
            out.push(placed);
            return;
        };
        if first.span > m {
            return;
        }
        for pos in 1..=m + 1 - first.span {
            let range = pos - 1..pos - 1 + first.span;
            if used[range.clone()].iter().any(|&u| u) {
                continue;
            }
            used[range.clone()].iter_mut().for_each(|u| *u = true);
            cur.push((pos, *first));
            rec(rest, m, used, cur, out);
            cur.pop();
            used[range].iter_mut().for_each(|u| *u = false);
        }
    }
    let mut out = Vec::new();
    rec(blocks, m, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

fn centered_placement(blocks: &[Block], m: usize) -> Option<Vec<(usize, Block)>> {
    let centre = |lo: usize, hi: usize, span: usize| -> Option<usize> {
        // centre a block of `span` inside [lo, hi]
        if hi < lo || hi - lo + 1 < span {
            return None;
        }
        let len = hi - lo + 1;
        Some(lo + (len - span + 1).div_ceil(2) - 1)
    };
    match blocks {
        [] => Some(Vec::new()),
        [main] => Some(vec![(centre(1, m, main.span)?, *main)]),
        [main, left, right] => {
            let c = centre(1, m, main.span)?;
            let l = centre(1, c.checked_sub(1)?, left.span)?;
            let r = centre(c + main.span, m, right.span)?;
            Some(vec![(l, *left), (c, *main), (r, *right)])
        }
        _ => None,
    }
}

fn admissible(rules: &PatternRuleSet, placed: &[(usize, Block)], m: usize) -> bool {
    let head = rules.head_protect.max(1);
    let tail = rules.tail_protect.max(1);
    if let Some(&(first, _)) = placed.first() {
        if first <= head {
            return false;
        }
    }
    if let Some(&(last, b)) = placed.last() {
        if last + b.span - 1 + tail > m {
            return false;
        }
    }
    gap_ok(rules.gap, rules.omega, placed)
}

fn gap_ok(rule: GapRule, omega: u32, placed: &[(usize, Block)]) -> bool {
    if placed.len() < 2 {
        return true;
    }
    let omega = omega as usize;
    let interval = |pos: usize, b: &Block, late_half: bool| -> (usize, usize) {
        let start = (pos - 1) * omega;
        if b.value == Cell::Half {
            let s = start + if late_half { omega / 2 } else { 0 };
            (s, s + omega / 2)
        } else {
            (start, start + b.span * omega)
        }
    };
    let gaps_ok = |ivs: &[(usize, usize)], min: usize| {
        ivs.windows(2).all(|w| w[1].0 >= w[0].1 && w[1].0 - w[0].1 >= min)
    };
    match rule {
        GapRule::None => true,
        GapRule::WholePeriods { min_minutes } => {
            let ivs: Vec<_> = placed
                .iter()
                .map(|(p, b)| ((p - 1) * omega, (p - 1 + b.span) * omega))
                .collect();
            gaps_ok(&ivs, min_minutes as usize)
        }
        GapRule::FootnoteHalves { min_minutes } => {
            let mut seen_half = false;
            let ivs: Vec<_> = placed
                .iter()
                .map(|(p, b)| {
                    let late = b.value == Cell::Half && seen_half;
                    seen_half |= b.value == Cell::Half;
                    interval(*p, b, late)
                })
                .collect();
            gaps_ok(&ivs, min_minutes as usize)
        }
        GapRule::IndependentHalves { min_minutes } => {
            let halves: Vec<usize> = (0..placed.len())
                .filter(|&i| placed[i].1.value == Cell::Half)
                .collect();
            (0u32..1 << halves.len()).any(|mask| {
                let ivs: Vec<_> = placed
                    .iter()
                    .enumerate()
                    .map(|(i, (p, b))| {
                        let late = halves
                            .iter()
                            .position(|&h| h == i)
                            .is_some_and(|k| mask & (1 << k) != 0);
                        interval(*p, b, late)
                    })
                    .collect();
                gaps_ok(&ivs, min_minutes as usize)
            })
        }
        GapRule::PerTransition {
            full_to_full,
            full_to_half,
            half_to_full,
            half_to_half,
        } => placed.windows(2).all(|w| {
            let (p0, b0) = w[0];
            let (p1, b1) = w[1];
            let between = p1 - (p0 + b0.span);
            let need = match (b0.value == Cell::Half, b1.value == Cell::Half) {
                (false, false) => full_to_full,
                (false, true) => full_to_half,
                (true, false) => half_to_full,
                (true, true) => half_to_half,
            };
            between >= need
        }),
    }
}

/// All `(pattern index, daily start)` pairs admitted by a daily window.
pub fn enumerate_daily_schedules(
    patterns: &[ShiftPattern],
    window: &DailyWindow,
    day_length: usize,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, p) in patterns.iter().enumerate() {
        for start in 1..=day_length {
            if window.admits(start, p.len()) {
                out.push((i, start));
            }
        }
    }
    out
}

/// Supply induced by one copy of pattern `s` starting at TP `start`.
pub fn pattern_supply_footprint(s: &ShiftPattern, start: usize, h: &Horizon) -> PeriodVector {
    let mut v = h.zeros();
    add_footprint(&mut v, s, start, h, 1);
    v
}

/// Adds `copies` of the footprint of `s` at `start` into `v`.
pub fn add_footprint(v: &mut PeriodVector, s: &ShiftPattern, start: usize, h: &Horizon, copies: i64) {
    for (t, c) in s.cells.iter().enumerate() {
        if let Some(j) = h.place(start as i64 + t as i64) {
            v.add_halves_at(j, c.halves() * copies);
        }
    }
}
