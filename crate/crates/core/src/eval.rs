//! Accuracy of synchronized frames against ground truth, and agreement
//! between independent annotators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EventCategory, EventType, Fps, Receiver, SyncResult};
use crate::synthgen::TruthRow;

pub const ACCURACY_COLUMNS: [&str; 7] = ["Total", "MD", "Exact", "W5", "W25", "W50", "Valid"];
pub const AGREEMENT_COLUMNS: [&str; 6] = ["Total", "MD", "Exact3", "Exact2", "Close3", "Close2"];

/// Cumulative accuracy buckets of one report row. An invalid prediction
/// counts towards `total` only.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Buckets {
    pub total: usize,
    pub valid: usize,
    pub exact: usize,
    pub w5: usize,
    pub w25: usize,
    pub w50: usize,
    abs_sum: u64,
}

impl Buckets {
    pub fn add(&mut self, predicted: Option<u32>, truth: u32) {
        self.total += 1;
        let Some(p) = predicted else {
            return;
        };
        let d = p.abs_diff(truth);
        self.valid += 1;
        self.abs_sum += u64::from(d);
        self.exact += usize::from(d == 0);
        self.w5 += usize::from(d <= 5);
        self.w25 += usize::from(d <= 25);
        self.w50 += usize::from(d <= 50);
    }

    /// Mean absolute frame difference over valid predictions.
    pub fn md(&self) -> Option<f64> {
        (self.valid > 0).then(|| self.abs_sum as f64 / self.valid as f64)
    }

    pub fn rate(&self, count: usize) -> Option<f64> {
        (self.total > 0).then(|| count as f64 / self.total as f64)
    }

    pub fn is_monotone(&self) -> bool {
        self.exact <= self.w5
            && self.w5 <= self.w25
            && self.w25 <= self.w50
            && self.w50 <= self.valid
            && self.valid <= self.total
    }

    fn merge(&mut self, o: &Buckets) {
        self.total += o.total;
        self.valid += o.valid;
        self.exact += o.exact;
        self.w5 += o.w5;
        self.w25 += o.w25;
        self.w50 += o.w50;
        self.abs_sum += o.abs_sum;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub label: String,
    pub buckets: Buckets,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub fps: Fps,
    /// Start rows per category, then the "Event start" total.
    pub starts: Vec<AccuracyRow>,
    /// End rows of the pass-like categories, then the "Event end" total.
    pub ends: Vec<AccuracyRow>,
    /// Pass-like events whose receiver label matches the truth.
    pub receivers_correct: usize,
    pub receivers_total: usize,
}

impl EvalReport {
    pub fn start_total(&self) -> &Buckets {
        &self.starts.last().expect("total row").buckets
    }

    pub fn end_total(&self) -> &Buckets {
        &self.ends.last().expect("total row").buckets
    }

    pub fn start_row(&self, category: EventCategory) -> Option<&Buckets> {
        self.starts
            .iter()
            .find(|r| r.label == category.label())
            .map(|r| &r.buckets)
    }

    pub fn rows(&self) -> impl Iterator<Item = &AccuracyRow> {
        self.starts.iter().chain(&self.ends)
    }

    /// Comma-separated rows with counts, rates and MD in frames.
    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("row,total,md,exact,w5,w25,w50,valid,exact_rate,w5_rate,w25_rate,w50_rate,valid_rate\n");
        for r in self.rows() {
            let b = &r.buckets;
            let rate = |c| b.rate(c).map_or(String::new(), |v| format!("{v:.6}"));
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.label,
                b.total,
                b.md().map_or(String::new(), |m| format!("{m:.6}")),
                b.exact,
                b.w5,
                b.w25,
                b.w50,
                b.valid,
                rate(b.exact),
                rate(b.w5),
                rate(b.w25),
                rate(b.w50),
                rate(b.valid)
            );
        }
        let _ = writeln!(
            s,
            "receivers,{},,{},,,,,,,,,",
            self.receivers_total, self.receivers_correct
        );
        s
    }

    /// Aligned table with a count and percentage per bucket.
    pub fn to_table(&self) -> String {
        let mut rows = Vec::new();
        for r in self.rows() {
            let b = &r.buckets;
            let cell = |c: usize| match b.rate(c) {
                Some(v) => format!("{c} ({:.1}%)", 100.0 * v),
                None => c.to_string(),
            };
            rows.push(vec![
                r.label.clone(),
                b.total.to_string(),
                b.md().map_or(String::new(), |m| format!("{m:.3}")),
                cell(b.exact),
                cell(b.w5),
                cell(b.w25),
                cell(b.w50),
                cell(b.valid),
            ]);
        }
        let mut out = aligned(&["Event type"], &ACCURACY_COLUMNS, &rows);
        let _ = writeln!(
            out,
            "Receivers correct: {} / {}",
            self.receivers_correct, self.receivers_total
        );
        out
    }
}

fn aligned(lead: &[&str], columns: &[&str], rows: &[Vec<String>]) -> String {
    let header: Vec<String> = lead.iter().chain(columns).map(|c| c.to_string()).collect();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&header).chain(rows) {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn orphans<'a>(left: &BTreeSet<&'a str>, right: &BTreeSet<&'a str>) -> Vec<&'a str> {
    left.difference(right).copied().collect()
}

/// Compares results and truth keyed by event id.
pub fn accuracy_report(results: &[SyncResult], truth: &[TruthRow], fps: Fps) -> Result<EvalReport> {
    let by_id: BTreeMap<&str, &SyncResult> = results.iter().map(|r| (r.event_id.as_str(), r)).collect();
    let r_ids: BTreeSet<&str> = by_id.keys().copied().collect();
    let t_ids: BTreeSet<&str> = truth.iter().map(|t| t.event_id.as_str()).collect();
    if r_ids.len() != results.len() || t_ids.len() != truth.len() || r_ids != t_ids {
        let mut msg = String::from("event ids of results and truth differ");
        let only_r = orphans(&r_ids, &t_ids);
        let only_t = orphans(&t_ids, &r_ids);
        if !only_r.is_empty() {
            let _ = write!(msg, "; results only: {}", only_r.join(", "));
        }
        if !only_t.is_empty() {
            let _ = write!(msg, "; truth only: {}", only_t.join(", "));
        }
        if r_ids.len() != results.len() || t_ids.len() != truth.len() {
            msg.push_str("; duplicate ids present");
        }
        return Err(Error::Report(msg));
    }

    let mut starts: BTreeMap<EventCategory, Buckets> =
        EventCategory::ALL.iter().map(|c| (*c, Buckets::default())).collect();
    let mut ends: BTreeMap<EventCategory, Buckets> = BTreeMap::new();
    let (mut rc, mut rt) = (0, 0);
    for t in truth {
        let r = by_id[t.event_id.as_str()];
        let cat = t.event_type.category();
        starts
            .get_mut(&cat)
            .expect("all categories")
            .add(r.start_frame, t.start_frame);
        if let Some(end) = t.end_frame {
            ends.entry(cat).or_default().add(r.end_frame, end);
        }
        if let Some(want) = &t.receiver {
            rt += 1;
            rc += usize::from(r.receiver.as_ref().is_some_and(|got| receiver_matches(got, want)));
        }
    }
    let rows = |m: BTreeMap<EventCategory, Buckets>, suffix: &str, total: &str| {
        let mut sum = Buckets::default();
        let mut v: Vec<AccuracyRow> = m
            .into_iter()
            .map(|(c, b)| {
                sum.merge(&b);
                AccuracyRow {
                    label: format!("{}{suffix}", c.label()),
                    buckets: b,
                }
            })
            .collect();
        v.push(AccuracyRow {
            label: total.to_string(),
            buckets: sum,
        });
        v
    };
    Ok(EvalReport {
        fps,
        starts: rows(starts, "", "Event start"),
        ends: rows(ends, " end", "Event end"),
        receivers_correct: rc,
        receivers_total: rt,
    })
}

fn receiver_matches(got: &Receiver, want: &str) -> bool {
    got.to_string() == want.trim()
}

/// One annotator's frame for one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Label {
    pub event_id: String,
    pub event_type: EventType,
    pub frame: i64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AgreementCounts {
    pub total: usize,
    pub exact3: usize,
    pub exact2: usize,
    pub close3: usize,
    pub close2: usize,
    md_sum: f64,
}

impl AgreementCounts {
    fn add(&mut self, f: [i64; 3]) {
        let pairs = [(f[0] - f[1]).abs(), (f[0] - f[2]).abs(), (f[1] - f[2]).abs()];
        self.total += 1;
        self.md_sum += pairs.iter().sum::<i64>() as f64 / 3.0;
        self.exact3 += usize::from(pairs.iter().all(|&d| d == 0));
        self.exact2 += usize::from(pairs.contains(&0));
        self.close3 += usize::from(pairs.iter().all(|&d| d <= 2));
        self.close2 += usize::from(pairs.iter().any(|&d| d <= 2));
    }

    /// Mean over events of the mean pairwise difference.
    pub fn md(&self) -> Option<f64> {
        (self.total > 0).then(|| self.md_sum / self.total as f64)
    }

    fn merge(&mut self, o: &AgreementCounts) {
        self.total += o.total;
        self.exact3 += o.exact3;
        self.exact2 += o.exact2;
        self.close3 += o.close3;
        self.close2 += o.close2;
        self.md_sum += o.md_sum;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    /// Rows per category present, then "Total".
    pub rows: Vec<(String, AgreementCounts)>,
    /// Median label of every event, in event id order.
    pub medians: Vec<(String, i64)>,
}

impl AgreementReport {
    pub fn total(&self) -> &AgreementCounts {
        &self.rows.last().expect("total row").1
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,total,md,exact3,exact2,close3,close2\n");
        for (label, c) in &self.rows {
            let _ = writeln!(
                s,
                "{label},{},{},{},{},{},{}",
                c.total,
                c.md().map_or(String::new(), |m| format!("{m:.6}")),
                c.exact3,
                c.exact2,
                c.close3,
                c.close2
            );
        }
        s
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(label, c)| {
                vec![
                    label.clone(),
                    c.total.to_string(),
                    c.md().map_or(String::new(), |m| format!("{m:.3}")),
                    c.exact3.to_string(),
                    c.exact2.to_string(),
                    c.close3.to_string(),
                    c.close2.to_string(),
                ]
            })
            .collect();
        aligned(&["Event type"], &AGREEMENT_COLUMNS, &rows)
    }
}

/// Agreement of three label sets over the same events.
pub fn agreement_report(label_sets: [&[Label]; 3]) -> Result<AgreementReport> {
    let maps: Vec<BTreeMap<&str, &Label>> = label_sets
        .iter()
        .map(|set| set.iter().map(|l| (l.event_id.as_str(), l)).collect())
        .collect();
    let ids: BTreeSet<&str> = maps.iter().flat_map(|m| m.keys().copied()).collect();
    let mut per_cat: BTreeMap<EventCategory, AgreementCounts> = BTreeMap::new();
    let mut medians = Vec::with_capacity(ids.len());
    for id in ids {
        let mut f = [0i64; 3];
        let mut ty = None;
        for (k, m) in maps.iter().enumerate() {
            let l = m
                .get(id)
                .ok_or_else(|| Error::Report(format!("label set {} has no label for event {id}", k + 1)))?;
            if ty.is_some_and(|t| t != l.event_type) {
                return Err(Error::Report(format!("label sets disagree on the type of event {id}")));
            }
            ty = Some(l.event_type);
            f[k] = l.frame;
        }
        per_cat.entry(ty.expect("three labels").category()).or_default().add(f);
        let mut sorted = f;
        sorted.sort_unstable();
        medians.push((id.to_string(), sorted[1]));
    }
    let mut total = AgreementCounts::default();
    let mut rows: Vec<(String, AgreementCounts)> = per_cat
        .into_iter()
        .map(|(c, a)| {
            total.merge(&a);
            (c.label().to_string(), a)
        })
        .collect();
    rows.push(("Total".to_string(), total));
    Ok(AgreementReport { rows, medians })
}

pub fn read_labels(path: &std::path::Path) -> Result<Vec<Label>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Validation(format!("{}: {e}", path.display()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Period;
    use proptest::prelude::*;

    fn truth(id: &str, ty: EventType, start: u32, end: Option<u32>, receiver: Option<&str>) -> TruthRow {
        TruthRow {
            event_id: id.into(),
            period: 1,
            event_type: ty,
            start_frame: start,
            end_frame: end,
            receiver: receiver.map(String::from),
        }
    }

    fn result(id: &str, start: Option<u32>) -> SyncResult {
        SyncResult {
            start_frame: start,
            ..SyncResult::invalid(id, Period::First)
        }
    }

    fn label(id: &str, frame: i64) -> Label {
        Label {
            event_id: id.into(),
            event_type: EventType::Pass,
            frame,
        }
    }

    #[test]
    fn identical_predictions_are_all_exact() {
        let t: Vec<_> = (0..4)
            .map(|i| truth(&format!("e{i}"), EventType::Pass, 100 * i + 10, None, None))
            .collect();
        let r: Vec<_> = t.iter().map(|t| result(&t.event_id, Some(t.start_frame))).collect();
        let rep = accuracy_report(&r, &t, Fps::TWENTY_FIVE).unwrap();
        let b = rep.start_total();
        assert_eq!((b.total, b.exact, b.valid), (4, 4, 4));
        assert_eq!(b.md(), Some(0.0));
    }

    #[test]
    fn one_event_off_by_thirty() {
        let mut t: Vec<_> = (0..10)
            .map(|i| truth(&format!("e{i}"), EventType::Pass, 100 * i, None, None))
            .collect();
        t.push(truth("late", EventType::Pass, 5000, None, None));
        let mut r: Vec<_> = t
            .iter()
            .take(10)
            .map(|t| result(&t.event_id, Some(t.start_frame)))
            .collect();
        r.push(result("late", Some(5030)));
        let b = *accuracy_report(&r, &t, Fps::TWENTY_FIVE).unwrap().start_total();
        assert_eq!(
            (b.exact, b.w5, b.w25, b.w50, b.valid, b.total),
            (10, 10, 10, 11, 11, 11)
        );
        assert!((b.md().unwrap() - 30.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn all_invalid_leaves_md_blank() {
        let t = vec![
            truth("a", EventType::Tackle, 10, None, None),
            truth("b", EventType::Foul, 20, None, None),
        ];
        let r = vec![result("a", None), result("b", None)];
        let rep = accuracy_report(&r, &t, Fps::TEN).unwrap();
        let b = rep.start_total();
        assert_eq!((b.valid, b.exact, b.w50, b.total), (0, 0, 0, 2));
        assert_eq!(b.md(), None);
        assert!(rep.to_csv().contains("Event start,2,,0,0,0,0,0,"));
    }

    #[test]
    fn category_rows_sum_to_total() {
        let t = vec![
            truth("p", EventType::Pass, 10, Some(30), Some("H2")),
            truth("c", EventType::CornerShort, 100, Some(120), Some("OUT")),
            truth("i", EventType::Interception, 200, None, None),
            truth("m", EventType::TakeOn, 300, None, None),
        ];
        let mut r: Vec<_> = t.iter().map(|t| result(&t.event_id, Some(t.start_frame + 3))).collect();
        r[0].end_frame = Some(30);
        r[0].receiver = Some(Receiver::Player("H2".into()));
        r[1].end_frame = Some(150);
        r[1].receiver = Some(Receiver::Goal);
        let rep = accuracy_report(&r, &t, Fps::TWENTY_FIVE).unwrap();
        let sum: usize = rep.starts[..4].iter().map(|r| r.buckets.total).sum();
        assert_eq!(sum, rep.start_total().total);
        assert_eq!(rep.end_total().total, 2);
        assert_eq!(rep.end_total().exact, 1);
        assert_eq!((rep.receivers_correct, rep.receivers_total), (1, 2));
        assert!(rep.rows().all(|r| r.buckets.is_monotone()));
    }

    #[test]
    fn orphans_are_listed() {
        let t = vec![truth("a", EventType::Pass, 1, None, None)];
        let r = vec![result("b", Some(1))];
        let err = accuracy_report(&r, &t, Fps::TEN).unwrap_err().to_string();
        assert!(
            err.contains("results only: b") && err.contains("truth only: a"),
            "{err}"
        );
    }

    #[test]
    fn table_header_uses_the_accuracy_columns() {
        let t = vec![truth("a", EventType::Pass, 1, None, None)];
        let r = vec![result("a", Some(1))];
        let table = accuracy_report(&r, &t, Fps::TEN).unwrap().to_table();
        let header: Vec<&str> = table.lines().next().unwrap().split_whitespace().collect();
        assert_eq!(&header[2..], &ACCURACY_COLUMNS);
    }

    fn agree(frames: [i64; 3]) -> AgreementReport {
        let sets: Vec<Vec<Label>> = frames.iter().map(|&f| vec![label("e", f)]).collect();
        agreement_report([&sets[0], &sets[1], &sets[2]]).unwrap()
    }

    #[test]
    fn identical_labels_count_everywhere() {
        let rep = agree([100, 100, 100]);
        let c = rep.total();
        assert_eq!((c.exact3, c.exact2, c.close3, c.close2), (1, 1, 1, 1));
        assert_eq!(c.md(), Some(0.0));
    }

    #[test]
    fn spread_labels() {
        let rep = agree([100, 101, 105]);
        let c = rep.total();
        assert_eq!((c.exact3, c.exact2, c.close3, c.close2), (0, 0, 0, 1));
        assert!((c.md().unwrap() - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(rep.medians, vec![("e".to_string(), 101)]);
    }

    #[test]
    fn pair_of_identical_labels() {
        let rep = agree([100, 100, 103]);
        let c = rep.total();
        assert_eq!((c.exact3, c.exact2), (0, 1));
        assert_eq!(rep.medians[0].1, 100);
    }

    #[test]
    fn missing_label_is_an_error() {
        let a = vec![label("e", 1), label("f", 2)];
        let b = vec![label("e", 1)];
        assert!(agreement_report([&a, &b, &a]).is_err());
    }

    proptest! {
        #[test]
        fn agreement_ignores_annotator_order(frames in prop::collection::vec(prop::array::uniform3(0i64..200), 1..30)) {
            let sets: Vec<Vec<Label>> = (0..3)
                .map(|k| {
                    frames
                        .iter()
                        .enumerate()
                        .map(|(i, f)| Label {
                            event_id: format!("e{i:02}"),
                            event_type: EventType::ALL[i % EventType::ALL.len()],
                            frame: f[k],
                        })
                        .collect()
                })
                .collect();
            let base = agreement_report([&sets[0], &sets[1], &sets[2]]).unwrap();
            for [a, b, c] in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                prop_assert_eq!(&base, &agreement_report([&sets[a], &sets[b], &sets[c]]).unwrap());
            }
        }
    }
}
