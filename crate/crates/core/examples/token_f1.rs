//! Answer normalization and token-level F1 on a few documentation answers.

use ragfront::metrics::{exact_match, normalize_answer, token_f1};

fn main() {
    let cases = [
        ("Provides load balancing for Services.", "provides load balancing"),
        ("Use the --max-pods flag", "--max-pods"),
        ("The default port is 6443.", "port 6443"),
        ("/etc/kubernetes/manifests", "/etc/kubernetes/manifests/"),
    ];
    for (pred, gold) in cases {
        println!(
            "{:<40} {:<30} f1={:.3} em={} tokens={:?}",
            pred,
            gold,
            token_f1(pred, gold),
            exact_match(pred, gold),
            normalize_answer(pred).tokens()
        );
    }
}
