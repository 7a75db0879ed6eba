use std::collections::BTreeMap;

use super::{Grid, TableConfig};
use crate::pdf::DrawSegment;

/// A chained axis-aligned rule: `pos` is the snapped cross coordinate,
/// `[start, end]` the extent along the rule.
#[derive(Debug, Clone, Copy)]
struct Rule {
    pos: f64,
    start: f64,
    end: f64,
}

/// Clusters sorted values that lie within `tol` of their neighbour and maps
/// every input to its cluster's mean rounded to whole points.
fn snap_values(values: &[f64], tol: f64) -> impl Fn(f64) -> f64 {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, f64, f64, usize)> = Vec::new(); // (min, max, sum, n)
    for v in sorted {
        match clusters.last_mut() {
            Some(c) if v - c.1 <= tol => {
                c.1 = v;
                c.2 += v;
                c.3 += 1;
            }
            _ => clusters.push((v, v, v, 1)),
        }
    }
    move |v: f64| {
        clusters
            .iter()
            .find(|c| v >= c.0 && v <= c.1)
            .map(|c| (c.2 / c.3 as f64).round())
            .unwrap_or(v.round())
    }
}

/// Merges collinear pieces whose gap is at most `tol`.
fn chain(mut pieces: Vec<Rule>, tol: f64) -> Vec<Rule> {
    pieces.sort_by(|a, b| a.pos.total_cmp(&b.pos).then(a.start.total_cmp(&b.start)));
    let mut out: Vec<Rule> = Vec::new();
    for p in pieces {
        match out.last_mut() {
            Some(last) if last.pos == p.pos && p.start <= last.end + tol => {
                last.end = last.end.max(p.end);
            }
            _ => out.push(p),
        }
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn detect_grids(segments: &[DrawSegment]) -> Vec<Grid> {
    detect_grids_with(segments, &TableConfig::default())
}

/// Finds ruled lattices: snap, chain into rules, connect crossing rules and
/// keep components with at least two rows, two columns and four crossings.
pub fn detect_grids_with(segments: &[DrawSegment], cfg: &TableConfig) -> Vec<Grid> {
    let mut by_page: BTreeMap<usize, Vec<&DrawSegment>> = BTreeMap::new();
    for s in segments {
        by_page.entry(s.page_index).or_default().push(s);
    }
    by_page
        .into_iter()
        .flat_map(|(page, segs)| detect_page(page, &segs, cfg.snap_tolerance))
        .collect()
}

fn detect_page(page: usize, segs: &[&DrawSegment], tol: f64) -> Vec<Grid> {
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for s in segs {
        let (dx, dy) = ((s.p1.x - s.p0.x).abs(), (s.p1.y - s.p0.y).abs());
        if dy <= tol && dx > tol {
            horizontal.push(Rule {
                pos: (s.p0.y + s.p1.y) / 2.0,
                start: s.p0.x.min(s.p1.x),
                end: s.p0.x.max(s.p1.x),
            });
        } else if dx <= tol && dy > tol {
            vertical.push(Rule {
                pos: (s.p0.x + s.p1.x) / 2.0,
                start: s.p0.y.min(s.p1.y),
                end: s.p0.y.max(s.p1.y),
            });
        }
    }
    if horizontal.len() < 2 || vertical.len() < 2 {
        return Vec::new();
    }

    let snap_y = snap_values(&horizontal.iter().map(|r| r.pos).collect::<Vec<_>>(), tol);
    let snap_x = snap_values(&vertical.iter().map(|r| r.pos).collect::<Vec<_>>(), tol);
    // Extents snap onto the perpendicular rule positions.
    let mut ends_x: Vec<f64> = vertical.iter().map(|r| r.pos).collect();
    ends_x.extend(horizontal.iter().flat_map(|r| [r.start, r.end]));
    let mut ends_y: Vec<f64> = horizontal.iter().map(|r| r.pos).collect();
    ends_y.extend(vertical.iter().flat_map(|r| [r.start, r.end]));
    let snap_ex = snap_values(&ends_x, tol);
    let snap_ey = snap_values(&ends_y, tol);

    let horizontal = chain(
        horizontal
            .iter()
            .map(|r| Rule { pos: snap_y(r.pos), start: snap_ex(r.start), end: snap_ex(r.end) })
            .collect(),
        tol,
    );
    let vertical = chain(
        vertical
            .iter()
            .map(|r| Rule { pos: snap_x(r.pos), start: snap_ey(r.start), end: snap_ey(r.end) })
            .collect(),
        tol,
    );

    let crosses = |h: &Rule, v: &Rule| {
        v.pos >= h.start - tol && v.pos <= h.end + tol && h.pos >= v.start - tol && h.pos <= v.end + tol
    };
    let n = horizontal.len() + vertical.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut crossings = Vec::new();
    for (i, h) in horizontal.iter().enumerate() {
        for (j, v) in vertical.iter().enumerate() {
            if crosses(h, v) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, horizontal.len() + j));
                parent[a] = b;
                crossings.push((i, j));
            }
        }
    }

    let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>, usize)> = BTreeMap::new();
    for i in 0..horizontal.len() {
        components.entry(find(&mut parent, i)).or_default().0.push(i);
    }
    for j in 0..vertical.len() {
        components
            .entry(find(&mut parent, horizontal.len() + j))
            .or_default()
            .1
            .push(j);
    }
    for (i, _) in &crossings {
        components.get_mut(&find(&mut parent, *i)).expect("component").2 += 1;
    }

    let mut grids: Vec<Grid> = components
        .into_values()
        .filter_map(|(hs, vs, count)| {
            let hs: Vec<Rule> = hs.into_iter().map(|i| horizontal[i]).collect();
            let vs: Vec<Rule> = vs.into_iter().map(|j| vertical[j]).collect();
            build_grid(page, &hs, &vs, count, tol)
        })
        .collect();
    grids.sort_by(|a, b| a.ys[0].total_cmp(&b.ys[0]).then(a.xs[0].total_cmp(&b.xs[0])));
    grids
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn build_grid(page: usize, hs: &[Rule], vs: &[Rule], crossings: usize, tol: f64) -> Option<Grid> {
    let xs = distinct(vs.iter().map(|r| r.pos).collect());
    let ys = distinct(hs.iter().map(|r| r.pos).collect());
    if xs.len() < 2 || ys.len() < 2 || crossings < 4 {
        return None;
    }
    let covered = |rules: &[Rule], pos: f64, a: f64, b: f64| {
        rules
            .iter()
            .any(|r| r.pos == pos && r.start <= a + tol && r.end >= b - tol)
    };
    let h_edges = ys
        .iter()
        .map(|&y| xs.windows(2).map(|w| covered(hs, y, w[0], w[1])).collect())
        .collect();
    let v_edges = ys
        .windows(2)
        .map(|w| xs.iter().map(|&x| covered(vs, x, w[0], w[1])).collect())
        .collect();
    Some(Grid { page_index: page, xs, ys, h_edges, v_edges })
}
