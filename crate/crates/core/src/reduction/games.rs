//! Games 0 to 5 of the forgery reduction against classical-query adversaries.
//!
//! - G0: the real scheme with a lazily sampled `H`.
//! - G1: also lost when two signing queries on one message reuse a salt.
//! - G2: every hash call goes through `Z`.
//! - G3: signing picks salts until `J(m|r) = (1, e)` and returns `(e, r)`.
//! - G4: the public matrix is a uniform `H_0`.
//! - G5: finalize also requires `J(m'|r') = (0, ·)`.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::f2::{BitMatrix, BitVector};
use crate::isd::DoomSolution;
use crate::oracle::salted_input;
use crate::reduction::lazy::{FlaggedErrorSampler, LazyOracle, UniformBits, ZOracle};
use crate::scheme::{
    decode_to_weight, keygen, sign, CodeFamily, PrangeDecoder, RandomCodes, Salt, SchemeParams,
    SecretKey, Signature, SigningPolicy, SyndromeDecoder, UuvCodes,
};
use crate::trials::TrialSeeds;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Game {
    G0,
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl Game {
    pub const ALL: [Game; 6] = [Game::G0, Game::G1, Game::G2, Game::G3, Game::G4, Game::G5];

    pub fn from_index(i: u8) -> Result<Self> {
        Self::ALL
            .get(i as usize)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("no game {i}; games are 0..=5")))
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyFamily {
    Random,
    Uuv { k_u: usize, k_v: usize },
}

impl KeyFamily {
    fn sample_key<R: Rng>(&self, params: SchemeParams, rng: &mut R) -> Result<SecretKey> {
        let kp = match *self {
            KeyFamily::Random => keygen(params, &RandomCodes, rng)?,
            KeyFamily::Uuv { k_u, k_v } => keygen(params, &UuvCodes { k_u, k_v }, rng)?,
        };
        Ok(kp.secret)
    }

    pub fn as_family(&self) -> Box<dyn CodeFamily> {
        match *self {
            KeyFamily::Random => Box::new(RandomCodes),
            KeyFamily::Uuv { k_u, k_v } => Box::new(UuvCodes { k_u, k_v }),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GameSetup {
    pub params: SchemeParams,
    pub family: KeyFamily,
    /// Adversary hash-query budget.
    pub q_hash: u64,
    /// Adversary signing-query budget.
    pub q_sign: u64,
    pub decoder: PrangeDecoder,
    /// Salts tried per secret-free signature.
    pub j_cap: u64,
}

impl GameSetup {
    /// `n = 24`, `k = 12`, `w = 5`, 40-bit salts, 8 hash and 2 signing queries.
    pub fn toy() -> Self {
        Self {
            params: SchemeParams::new(24, 12, 5, 40).expect("valid"),
            family: KeyFamily::Random,
            q_hash: 8,
            q_sign: 2,
            decoder: PrangeDecoder {
                budget: 2_000,
                seeds_per_weight: 4,
            },
            j_cap: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forgery {
    pub message: Vec<u8>,
    pub signature: Signature,
}

/// The procedures an adversary may call. Hash and signing calls beyond the
/// setup's budgets fail with [`Error::AdversaryBudget`].
pub trait GameOracles {
    fn params(&self) -> SchemeParams;
    fn public_key(&self) -> &BitMatrix;
    fn hash_budget(&self) -> u64;
    fn sign_budget(&self) -> u64;
    fn hash(&mut self, message: &[u8], salt: &[u8]) -> Result<BitVector>;
    fn sign(&mut self, message: &[u8]) -> Result<Signature>;
}

pub trait Adversary: Sync {
    fn name(&self) -> &'static str;

    /// `leak` is the secret key matching the public matrix when one exists
    /// (games 0 to 3), for adversaries that model a forger with a trapdoor.
    fn forge(
        &self,
        oracles: &mut dyn GameOracles,
        leak: Option<&SecretKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Forgery>>;
}

/// Outputs the zero word with a random salt.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullAdversary;

impl Adversary for NullAdversary {
    fn name(&self) -> &'static str {
        "null"
    }
    fn forge(
        &self,
        o: &mut dyn GameOracles,
        _: Option<&SecretKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Forgery>> {
        let params = o.params();
        Ok(Some(Forgery {
            message: b"null".to_vec(),
            signature: Signature {
                error: BitVector::zeros(params.n),
                salt: Salt::random(params.lambda0, rng),
            },
        }))
    }
}

/// Asks for a signature and hands it back unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReplayAdversary;

impl Adversary for ReplayAdversary {
    fn name(&self) -> &'static str {
        "replay"
    }
    fn forge(
        &self,
        o: &mut dyn GameOracles,
        _: Option<&SecretKey>,
        _: &mut ChaCha8Rng,
    ) -> Result<Option<Forgery>> {
        let message = b"replayed".to_vec();
        let signature = o.sign(&message)?;
        Ok(Some(Forgery { message, signature }))
    }
}

/// Spends its signing budget on distinct messages, then forges a fresh one:
/// it hashes `m'` under new salts and inverts the syndrome with the leaked
/// trapdoor if there is one, or with the generic decoder otherwise.
#[derive(Clone, Copy, Debug)]
pub struct PlantedAdversary {
    pub decoder: PrangeDecoder,
    /// Sign the same message every time, which makes salt reuse possible.
    pub repeat_message: bool,
}

impl Default for PlantedAdversary {
    fn default() -> Self {
        Self {
            decoder: PrangeDecoder {
                budget: 2_000,
                seeds_per_weight: 4,
            },
            repeat_message: false,
        }
    }
}

impl Adversary for PlantedAdversary {
    fn name(&self) -> &'static str {
        "planted"
    }

    fn forge(
        &self,
        o: &mut dyn GameOracles,
        leak: Option<&SecretKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Forgery>> {
        let params = o.params();
        for i in 0..o.sign_budget() {
            let m = if self.repeat_message { 0 } else { i };
            o.sign(format!("chosen {m}").as_bytes())?;
        }
        let message = b"forgery".to_vec();
        let public = o.public_key().clone();
        for _ in 0..o.hash_budget() {
            let salt = Salt::random(params.lambda0, rng);
            let s = o.hash(&message, salt.as_bytes())?;
            let decoded = match leak {
                Some(sk) => {
                    let target = sk.s_inv.mul_vec(&s)?;
                    self.decoder
                        .decode(&sk.h_sec, &target, params.w, rng)
                        .and_then(|e| sk.permutation.apply(&e))
                }
                None => decode_to_weight(
                    &public,
                    &s,
                    params.w,
                    self.decoder.budget,
                    self.decoder.seeds_per_weight,
                    rng,
                ),
            };
            match decoded {
                Ok(error) => {
                    return Ok(Some(Forgery {
                        message,
                        signature: Signature { error, salt },
                    }))
                }
                Err(Error::NotFound { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }
}

type Z = ZOracle<LazyOracle<UniformBits>, LazyOracle<FlaggedErrorSampler>>;

struct Challenger<'a> {
    game: Game,
    setup: &'a GameSetup,
    z: Z,
    secret: Option<SecretKey>,
    rng: ChaCha8Rng,
    signed: Vec<Vec<u8>>,
    salts: HashMap<Vec<u8>, HashSet<Vec<u8>>>,
    collision: bool,
    hash_queries: u64,
    sign_queries: u64,
}

impl Challenger<'_> {
    fn hash_input(&mut self, input: &[u8]) -> BitVector {
        if self.game >= Game::G2 {
            self.z.z(input)
        } else {
            self.z.h.get(input)
        }
    }
}

impl GameOracles for Challenger<'_> {
    fn params(&self) -> SchemeParams {
        self.setup.params
    }

    fn public_key(&self) -> &BitMatrix {
        &self.z.h_pub
    }

    fn hash_budget(&self) -> u64 {
        self.setup.q_hash
    }

    fn sign_budget(&self) -> u64 {
        self.setup.q_sign
    }

    fn hash(&mut self, message: &[u8], salt: &[u8]) -> Result<BitVector> {
        if self.hash_queries == self.setup.q_hash {
            return Err(Error::AdversaryBudget {
                oracle: "hash",
                limit: self.setup.q_hash,
            });
        }
        self.hash_queries += 1;
        Ok(self.hash_input(&salted_input(message, salt)))
    }

    fn sign(&mut self, message: &[u8]) -> Result<Signature> {
        if self.sign_queries == self.setup.q_sign {
            return Err(Error::AdversaryBudget {
                oracle: "sign",
                limit: self.setup.q_sign,
            });
        }
        self.sign_queries += 1;
        let params = self.setup.params;
        let sig = if self.game >= Game::G3 {
            self.z
                .sign_without_secret(message, params.lambda0, self.setup.j_cap, &mut self.rng)?
                .0
        } else {
            let sk = self
                .secret
                .as_ref()
                .expect("games 0 to 2 keep the secret key");
            let policy = SigningPolicy {
                resalt_on_failure: true,
                max_resalts: 16,
            };
            if self.game == Game::G2 {
                sign(
                    sk,
                    message,
                    &mut self.z,
                    &self.setup.decoder,
                    policy,
                    &mut self.rng,
                )?
            } else {
                sign(
                    sk,
                    message,
                    &mut self.z.h,
                    &self.setup.decoder,
                    policy,
                    &mut self.rng,
                )?
            }
        };
        self.signed.push(message.to_vec());
        if !self
            .salts
            .entry(message.to_vec())
            .or_default()
            .insert(sig.salt.as_bytes().to_vec())
        {
            self.collision = true;
        }
        Ok(sig)
    }
}

/// Everything needed to judge and post-process one trial.
#[derive(Clone, Debug)]
pub struct GameTranscript {
    pub game: Game,
    pub won: bool,
    /// The salt-reuse event of game 1 (recorded in every game).
    pub collision: bool,
    pub public: BitMatrix,
    pub w: usize,
    pub forgery: Option<Forgery>,
    pub signed: Vec<Vec<u8>>,
    pub hash_queries: u64,
    pub sign_queries: u64,
    pub j_calls: u64,
    /// The trial's `H`, for replay.
    pub h_oracle: LazyOracle<UniformBits>,
}

/// Runs trial `trial` of `game`. All randomness comes from the trial's
/// stream, so the same `(seeds, trial)` always gives the same transcript.
pub fn run_trial(
    game: Game,
    adversary: &dyn Adversary,
    setup: &GameSetup,
    seeds: &TrialSeeds,
    trial: u64,
) -> Result<GameTranscript> {
    let params = setup.params;
    let m = params.redundancy();
    let mut rng = seeds.rng(trial);
    let h = LazyOracle::new(UniformBits { bits: m }, rng.gen());
    let j = LazyOracle::new(
        FlaggedErrorSampler {
            n: params.n,
            w: params.w,
        },
        rng.gen(),
    );
    let mut adv_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let (public, secret) = if game >= Game::G4 {
        (BitMatrix::random(m, params.n, &mut rng), None)
    } else {
        let sk = setup.family.sample_key(params, &mut rng)?;
        (sk.h_pub.clone(), Some(sk))
    };
    let mut ch = Challenger {
        game,
        setup,
        z: ZOracle::new(h, j, public)?,
        secret,
        rng,
        signed: Vec::new(),
        salts: HashMap::new(),
        collision: false,
        hash_queries: 0,
        sign_queries: 0,
    };
    let leak = ch.secret.clone();
    let forgery = adversary.forge(&mut ch, leak.as_ref(), &mut adv_rng)?;
    let won = match &forgery {
        None => false,
        Some(f) => finalize(&mut ch, f)?,
    };
    Ok(GameTranscript {
        game,
        won,
        collision: ch.collision,
        public: ch.z.h_pub.clone(),
        w: params.w,
        forgery,
        signed: ch.signed,
        hash_queries: ch.hash_queries,
        sign_queries: ch.sign_queries,
        j_calls: ch.z.j_calls(),
        h_oracle: ch.z.h,
    })
}

fn finalize(ch: &mut Challenger<'_>, f: &Forgery) -> Result<bool> {
    let params = ch.setup.params;
    let fresh = !ch.signed.iter().any(|m| m == &f.message);
    let no_collision = ch.game < Game::G1 || !ch.collision;
    let e = &f.signature.error;
    if e.len() != params.n || f.signature.salt.bits() != params.lambda0 {
        return Ok(false);
    }
    let input = salted_input(&f.message, f.signature.salt.as_bytes());
    let s = ch.hash_input(&input);
    let valid = e.weight() == params.w && ch.z.h_pub.mul_vec(e)? == s;
    let flag_ok = ch.game < Game::G5 || !ch.z.j.get(&input).flag;
    Ok(fresh && no_collision && valid && flag_ok)
}

/// Turns a game-5 win into a DOOM solution against `(H_0, H)`. `None` for
/// a loss; an internal error if the transcript does not check out.
pub fn extract_doom_solution(t: &GameTranscript) -> Result<Option<DoomSolution>> {
    if t.game != Game::G5 {
        return Err(Error::Parameter(format!(
            "extraction needs a game-5 transcript, got {:?}",
            t.game
        )));
    }
    if !t.won {
        return Ok(None);
    }
    let f = t
        .forgery
        .as_ref()
        .ok_or_else(|| Error::Internal("winning transcript without a forgery".into()))?;
    let input = salted_input(&f.message, f.signature.salt.as_bytes());
    let mut h = t.h_oracle.replay();
    DoomSolution::new(&t.public, f.signature.error.clone(), input, &mut h, t.w).map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameStats {
    pub game: Game,
    pub trials: u64,
    pub successes: u64,
    /// Trials where the salt-reuse event occurred.
    pub collisions: u64,
    /// Game-5 wins that yielded a validated DOOM solution.
    pub extractions: u64,
}

impl GameStats {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// 95% Wilson score interval for the success probability.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, 1.959_963_984_540_054)
    }

    /// One line of `key=value` fields.
    pub fn to_record(&self) -> String {
        let (lo, hi) = self.wilson();
        format!(
            "game={} trials={} successes={} frequency={:.6} wilson_low={:.6} wilson_high={:.6} collisions={} extractions={}",
            self.game.index(),
            self.trials,
            self.successes,
            self.frequency(),
            lo,
            hi,
            self.collisions,
            self.extractions
        )
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs `trials` independent trials, spread over `workers` threads. Game-5
/// wins are passed through [`extract_doom_solution`]; a failed extraction
/// is returned as an error.
pub fn run_game<R: Rng + ?Sized>(
    game: Game,
    adversary: &dyn Adversary,
    setup: &GameSetup,
    trials: u64,
    workers: usize,
    rng: &mut R,
) -> Result<GameStats> {
    let seeds = TrialSeeds::draw(rng);
    run_game_with_seeds(game, adversary, setup, trials, workers, &seeds)
}

pub fn run_game_with_seeds(
    game: Game,
    adversary: &dyn Adversary,
    setup: &GameSetup,
    trials: u64,
    workers: usize,
    seeds: &TrialSeeds,
) -> Result<GameStats> {
    let one = |t: u64| -> Result<(bool, bool, bool)> {
        let tr = run_trial(game, adversary, setup, seeds, t)?;
        let extracted = game == Game::G5 && extract_doom_solution(&tr)?.is_some();
        Ok((tr.won, tr.collision, extracted))
    };
    let outcomes: Vec<Result<(bool, bool, bool)>> = if workers <= 1 {
        (0..trials).map(one).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(|| (0..trials).into_par_iter().map(one).collect())
    };
    let mut stats = GameStats {
        game,
        trials,
        successes: 0,
        collisions: 0,
        extractions: 0,
    };
    for o in outcomes {
        let (won, collision, extracted) = o?;
        stats.successes += won as u64;
        stats.collisions += collision as u64;
        stats.extractions += extracted as u64;
    }
    Ok(stats)
}
