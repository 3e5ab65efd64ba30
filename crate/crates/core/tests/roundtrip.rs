use grec_core::ans::AnsState;
use grec_core::metrics::graph_nll;
use grec_core::{decode_graph, encode_graph, parse_edge_list, write_edge_list, GraphSpec, ParseOptions, HEADER_LEN};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy() -> impl Strategy<Value = (GraphSpec, u64)> {
    (1u32..30, 2usize..4, any::<bool>(), 1u64..4).prop_flat_map(|(n, arity, directed, beta)| {
        let edge = prop::collection::vec(1..=n, arity);
        prop::collection::vec(edge, 0..60)
            .prop_map(move |edges| (GraphSpec::from_edges(u64::from(n), arity, directed, edges).unwrap(), beta))
    })
}

proptest! {
    #[test]
    fn decode_inverts_encode((g, beta) in graph_strategy()) {
        let bytes = encode_graph(&g, beta).unwrap();
        prop_assert_eq!(decode_graph(&bytes).unwrap(), g);
    }

    #[test]
    fn payload_tracks_graph_nll((g, beta) in graph_strategy()) {
        let bytes = encode_graph(&g, beta).unwrap();
        let nll = graph_nll::<f64>(&g, beta).unwrap().graph_nll_bits;
        let info = if g.m() == 0 { 0.0 } else { AnsState::restore(&bytes[HEADER_LEN..]).unwrap().information_bits() };
        prop_assert!((info - nll).abs() < 64.0, "info {} nll {}", info, nll);
    }

    #[test]
    fn edge_order_does_not_change_the_container(
        (g, beta) in graph_strategy(),
        seed in any::<u64>(),
    ) {
        let mut text = Vec::new();
        write_edge_list(&g, &mut text).unwrap();
        let text = String::from_utf8(text).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        let header = lines.remove(0);
        lines.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = std::iter::once(header).chain(lines).collect::<Vec<_>>().join("\n");
        let opts = ParseOptions { directed: g.is_directed(), arity: Some(g.arity()), ..ParseOptions::default() };
        let reparsed = parse_edge_list(shuffled.as_bytes(), &opts).unwrap();
        prop_assert_eq!(encode_graph(&reparsed, beta).unwrap(), encode_graph(&g, beta).unwrap());
    }
}
