use super::LayoutConfig;
use crate::pdf::RawDocument;

pub fn bind_links(doc: &RawDocument) -> RawDocument {
    bind_links_with(doc, &LayoutConfig::default())
}

/// Attaches each link's URI to every span it covers by at least
/// `link_min_overlap` of the span's area. When several links qualify the
/// one with the larger overlap wins.
pub fn bind_links_with(doc: &RawDocument, cfg: &LayoutConfig) -> RawDocument {
    let mut out = doc.clone();
    for span in &mut out.spans {
        let area = span.bbox.area();
        let best = doc
            .links
            .iter()
            .filter(|l| l.page_index == span.page_index)
            .filter_map(|l| {
                let covered = if area > 0.0 {
                    span.bbox.intersection(&l.bbox).map_or(0.0, |r| r.area()) / area
                } else if l.bbox.contains(span.bbox.center()) {
                    1.0
                } else {
                    0.0
                };
                (covered >= cfg.link_min_overlap).then_some((covered, l))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((_, link)) = best {
            span.link = Some(link.uri.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::layout::test_support::span;
    use crate::pdf::LinkBox;

    fn doc_with(spans: Vec<crate::pdf::Span>, links: Vec<Rect>) -> RawDocument {
        RawDocument {
            page_count: 1,
            page_sizes: vec![(612.0, 792.0)],
            spans,
            links: links
                .into_iter()
                .map(|bbox| LinkBox { page_index: 0, bbox, uri: "https://x".into() })
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn exact_overlap_binds() {
        let s = span(0, 72.0, 100.0, 10.0, "docs");
        let d = doc_with(vec![s.clone()], vec![s.bbox]);
        assert_eq!(bind_links(&d).spans[0].link.as_deref(), Some("https://x"));
    }

    #[test]
    fn ten_percent_overlap_does_not_bind() {
        let s = span(0, 100.0, 100.0, 10.0, "abcd"); // 20 x 10
        let b = s.bbox;
        // covers 2 of 20 horizontal points over full height: 10%.
        let link = Rect::new(b.x1 - 2.0, b.y0, b.x1 + 30.0, b.y1);
        let ratio = s.bbox.intersection(&link).unwrap().area() / s.bbox.area();
        assert!((ratio - 0.1).abs() < 1e-9);
        assert!(bind_links(&doc_with(vec![s], vec![link])).spans[0].link.is_none());
    }

    #[test]
    fn one_link_binds_two_spans() {
        let a = span(0, 100.0, 100.0, 10.0, "abcd"); // x 100..120
        let b = span(0, 130.0, 100.0, 10.0, "efgh"); // x 130..150
        // covers 108..137: 12/20 = 60% of a, 7/20 = 35%... widen to 136..144? use explicit
        let link = Rect::new(108.0, a.bbox.y0, 144.0, a.bbox.y1);
        let ra = a.bbox.intersection(&link).unwrap().area() / a.bbox.area();
        let rb = b.bbox.intersection(&link).unwrap().area() / b.bbox.area();
        assert!((ra - 0.6).abs() < 1e-9 && (rb - 0.7).abs() < 1e-9);
        let out = bind_links(&doc_with(vec![a, b], vec![link]));
        assert!(out.spans.iter().all(|s| s.link.is_some()));
    }
}
