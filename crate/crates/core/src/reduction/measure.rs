//! Empirical inputs for the bound: `E[ρ(D_w^{H_pub}, U)]` over keys and the
//! distance of a decoder's outputs from uniform weight-`w` words.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{syndrome_weight_distribution, EnumerationGuard, ParityCheckCode};
use crate::f2::BitVector;
use crate::reduction::games::KeyFamily;
use crate::scheme::{keygen, SchemeParams, SecretKey, SyndromeDecoder};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PublicDistance {
    pub mean: f64,
    pub per_key: Vec<f64>,
}

/// Averages `ρ(D_w^{H_pub}, U_{n-k})` over `keys` fresh public keys, each
/// computed by full enumeration of `S_w`.
pub fn measure_expected_public_distance<R: Rng>(
    params: SchemeParams,
    family: KeyFamily,
    keys: usize,
    guard: &EnumerationGuard,
    rng: &mut R,
) -> Result<PublicDistance> {
    if keys == 0 {
        return Err(Error::Parameter("need at least one key".into()));
    }
    guard.check(params.n, params.w)?;
    let fam = family.as_family();
    let mut per_key = Vec::with_capacity(keys);
    for _ in 0..keys {
        let kp = keygen(params, fam.as_ref(), rng)?;
        let code = ParityCheckCode::new(kp.public.h_pub)?;
        per_key.push(syndrome_weight_distribution(&code, params.w, guard)?.distance_to_uniform());
    }
    let mean = per_key.iter().sum::<f64>() / keys as f64;
    Ok(PublicDistance { mean, per_key })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoderDistance {
    /// Total variation between the empirical output law and `U_w`.
    pub distance: f64,
    pub samples: u64,
    /// Uniform syndromes the decoder gave up on; not part of the histogram.
    pub failures: u64,
}

/// Decodes `samples` uniform syndromes with the key's trapdoor and compares
/// the histogram of outputs with the uniform law on `S_w`. The estimate is
/// biased upwards by sampling noise of order `√(C(n,w)/samples)`.
pub fn empirical_decoder_distance(
    sk: &SecretKey,
    decoder: &dyn SyndromeDecoder,
    samples: u64,
    guard: &EnumerationGuard,
    rng: &mut ChaCha8Rng,
) -> Result<DecoderDistance> {
    let params = sk.params;
    let words = guard.check(params.n, params.w)? as f64;
    let mut counts: HashMap<BitVector, u64> = HashMap::new();
    let mut failures = 0;
    for _ in 0..samples {
        let s = BitVector::random(params.redundancy(), rng);
        let target = sk.s_inv.mul_vec(&s)?;
        match decoder.decode(&sk.h_sec, &target, params.w, rng) {
            Ok(e) => *counts.entry(e).or_insert(0) += 1,
            Err(Error::NotFound { .. }) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    let got = (samples - failures) as f64;
    if got == 0.0 {
        return Err(Error::SigningFailure(
            "decoder failed on every sample".into(),
        ));
    }
    let seen: f64 = counts
        .values()
        .map(|&c| (c as f64 / got - 1.0 / words).abs())
        .sum();
    let unseen = (words - counts.len() as f64) / words;
    Ok(DecoderDistance {
        distance: 0.5 * (seen + unseen),
        samples,
        failures,
    })
}
