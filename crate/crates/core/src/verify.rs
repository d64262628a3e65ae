//! Checks every closed form against the generators and analyzers, one row per
//! (claim, r, setting).

use std::ops::RangeInclusive;

use rand::Rng;
use serde::Serialize;

use crate::complement::adjacent_sides_exhaustive;
use crate::diagram::{extract_unchecked, CrossingNumber};
use crate::error::{Error, Result};
use crate::families::{derive_knot, gen_link, predicted, saturated_interior, Prediction};
use crate::grid::{BoardSpec, Setting};
use crate::mosaic::{count_closures_on, Mosaic};
use crate::par::{self, Exec};
use crate::sample::seeded;

/// Largest r at which the adjacent-sides check runs exhaustively.
pub const ADJACENT_SIDES_MAX_R: usize = 5;
pub const STATE_VARIANTS: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimRow {
    pub claim: &'static str,
    /// the closed form or property being checked
    pub anchor: String,
    pub r: usize,
    pub setting: Setting,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<ClaimRow>,
    pub passed: usize,
    pub failed: usize,
    /// instances without a generator
    pub skipped: Vec<(usize, Setting)>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

fn row(
    claim: &'static str,
    anchor: &str,
    r: usize,
    setting: Setting,
    expected: impl ToString,
    observed: impl ToString,
) -> ClaimRow {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    ClaimRow {
        claim,
        anchor: anchor.to_string(),
        r,
        setting,
        pass: expected == observed,
        expected,
        observed,
    }
}

fn anchors(setting: Setting, r: usize) -> (&'static str, &'static str, &'static str) {
    match setting {
        Setting::HexStandard => ("9r^2-27r+21", "r-1", if r == 3 { "19" } else { "9r^2-28r+23" }),
        Setting::HexSemiEnhanced => ("9r^2-27r+21", "ceil(r/2)", "9r^2-27r+22-ceil(r/2)"),
        Setting::HexEnhanced => ("9r^2-24r+15", "r+1", "9r^2-25r+15"),
        Setting::Rect if r.is_multiple_of(2) => ("(r-2)^2", "r-2", "(r-2)^2-(r-3)"),
        Setting::Rect => ("(r-2)^2", "1", "(r-2)^2-2"),
    }
}

fn instance(r: usize, setting: Setting) -> Result<Vec<ClaimRow>> {
    let p: Prediction = predicted(r, setting)?;
    // odd square boards only have a knot generator
    let link = match gen_link(r, setting) {
        Err(Error::Unsupported(_)) if setting == Setting::Rect => None,
        other => Some(other?),
    };
    let derived = derive_knot(r, setting)?;
    let (cross_anchor, comp_anchor, knot_anchor) = if r == 2 { ("3", "1", "3") } else { anchors(setting, r) };
    let mut rows = Vec::new();

    if let Some(link) = &link {
        let ld = extract_unchecked(link);
        rows.push(row(
            "link-crossings",
            cross_anchor,
            r,
            setting,
            p.link_crossings,
            ld.crossing_count(),
        ));
        rows.push(row(
            "link-components",
            comp_anchor,
            r,
            setting,
            p.link_components,
            ld.component_count(),
        ));
    }
    if setting != Setting::HexEnhanced {
        let sat = saturated_interior(BoardSpec::new(setting, r)?)?;
        rows.push(row(
            "saturated-crossings",
            cross_anchor,
            r,
            setting,
            p.saturated_crossings,
            sat.crossing_count(),
        ));
    }

    let kd = extract_unchecked(&derived.knot);
    let cn = kd.certify_crossing_number();
    rows.push(row(
        "knot-crossing-number",
        knot_anchor,
        r,
        setting,
        CrossingNumber::Certified(p.knot_crossing_bound),
        cn,
    ));
    rows.push(row("knot-components", "1", r, setting, 1, kd.component_count()));
    let replay = derived
        .schedule
        .apply(&derived.parent)
        .map(|m| m == derived.knot)
        .unwrap_or(false);
    rows.push(row(
        "knot-schedule-replays",
        "schedule applied to parent gives the knot",
        r,
        setting,
        true,
        replay,
    ));

    if let (Setting::HexStandard, Some(link)) = (setting, &link) {
        let sat = saturated_interior(BoardSpec::new(setting, r)?)?;
        let ring = sat.board().ring().to_vec();
        let n = count_closures_on(&sat, &ring, &|_, _| true, false);
        rows.push(row("two-closures", "2 boundary closures", r, setting, 2, n));

        let mut rng = seeded(r as u64, 0);
        let counts: Vec<usize> = (0..STATE_VARIANTS)
            .map(|_| {
                let mut m: Mosaic = link.clone();
                for c in 0..m.board().len() {
                    let f = *m.face(c);
                    let k = f.crossing_count();
                    if k > 0 {
                        m.set(c, f.with_state_bits(rng.gen_range(0..1u8 << k)));
                    }
                }
                extract_unchecked(&m).component_count()
            })
            .collect();
        let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
        let observed = if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}..{hi}")
        };
        rows.push(row(
            "state-variant-components",
            "same component count under any crossing states",
            r,
            setting,
            p.link_components,
            observed,
        ));
    }

    if setting == Setting::HexEnhanced && (3..=ADJACENT_SIDES_MAX_R).contains(&r) {
        let rep = adjacent_sides_exhaustive(r)?;
        rows.push(row(
            "adjacent-sides",
            "complement endpoint between crossing tiles on adjacent boundary sides",
            r,
            setting,
            "0 counterexamples",
            format!("{} counterexamples", rep.counterexamples),
        ));
    }
    Ok(rows)
}

pub fn verify_claims(r_range: RangeInclusive<usize>, settings: &[Setting]) -> VerificationReport {
    verify_claims_with(Exec::Auto, r_range, settings)
}

/// Instances run independently and come back in (r, setting) order.
pub fn verify_claims_with(exec: Exec, r_range: RangeInclusive<usize>, settings: &[Setting]) -> VerificationReport {
    let work: Vec<(usize, Setting)> = r_range.flat_map(|r| settings.iter().map(move |&s| (r, s))).collect();
    let results = par::map(exec, &work, |&(r, s)| instance(r, s));
    let mut rep = VerificationReport::default();
    for (&(r, s), res) in work.iter().zip(results) {
        match res {
            Ok(rows) => rep.rows.extend(rows),
            Err(Error::Unsupported(_)) => rep.skipped.push((r, s)),
            Err(e) => rep
                .rows
                .push(row("instance", "generators and analyzers run", r, s, "ok", e)),
        }
    }
    rep.passed = rep.rows.iter().filter(|x| x.pass).count();
    rep.failed = rep.rows.len() - rep.passed;
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances_pass() {
        let rep = verify_claims(2..=3, &Setting::HEX);
        assert!(
            rep.all_pass(),
            "{:#?}",
            rep.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>()
        );
        assert!(rep.skipped.is_empty());
    }

    #[test]
    fn rect_below_four_is_skipped() {
        let rep = verify_claims(3..=3, &[Setting::Rect]);
        assert_eq!(rep.skipped, vec![(3, Setting::Rect)]);
    }
}
