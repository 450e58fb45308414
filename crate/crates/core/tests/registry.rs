//! Every id a certificate can carry is registered, under the module that
//! emits it, and nothing registered is dead.

use std::collections::BTreeSet;

use glcm_core::explain::{self, ELLIS, NONSTD, PIPELINE, QUASIHOM, SL2};
use glcm_core::gen::random_pipeline;
use glcm_core::pipeline::{alt_error_sets, theorem_certificate};
use glcm_core::suites::{run_suite, SuiteOpts};
use glcm_core::Exec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ids(cert: &glcm_core::certificate::Certificate) -> BTreeSet<String> {
    cert.checks.iter().map(|c| c.id.clone()).collect()
}

fn registered(module: &str) -> BTreeSet<String> {
    explain::ids_of(module).map(String::from).collect()
}

#[test]
fn pipeline_ids() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inst = random_pipeline(&mut rng).unwrap();
    let mut seen = ids(&theorem_certificate(&inst).unwrap());
    seen.extend(ids(&alt_error_sets(&inst).unwrap()));
    assert_eq!(seen, registered(PIPELINE));
}

#[test]
fn suite_ids() {
    for (suite, module, samples) in [("ellis", ELLIS, 3), ("quasihom", QUASIHOM, 2), ("sl2", SL2, 50), ("nonstd", NONSTD, 20)] {
        let cert = run_suite(suite, SuiteOpts { seed: 1, samples: Some(samples), exec: Exec::Sequential }).unwrap();
        assert_eq!(ids(&cert), registered(module), "{suite}");
    }
}

#[test]
fn modules_partition_the_registry() {
    let total: usize = [PIPELINE, QUASIHOM, ELLIS, SL2, NONSTD].iter().map(|m| registered(m).len()).sum();
    assert_eq!(total, explain::REGISTRY.len());
}
