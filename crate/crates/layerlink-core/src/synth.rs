//! Synthetic two-layer geo-social datasets with planted multiplexity.
//!
//! The generator builds a rewired ring lattice as the base friendship graph,
//! promotes edges to multiplex links, places users in a synthetic city and
//! samples event streams (mentions, hashtags, check-ins) whose rates depend
//! on the pair's link class. Everything is driven by one seeded generator,
//! so a given config reproduces byte-identical output.
//!
//! Multiplex promotion mixes two mechanisms: with probability
//! `engagement_mix` an edge is multiplex iff both endpoints carry an
//! "engaged on both networks" flag (each drawn with probability sqrt(mu)),
//! otherwise it is an independent Bernoulli(mu) draw. Both mechanisms give
//! each edge marginal probability mu of being multiplex, but the first
//! clusters multiplex links around engaged users, which is what makes core
//! neighbourhoods informative. Interaction rates are scaled per link class
//! (multiplex / single-layer / unconnected "casual" pairs), planting the
//! class orderings the analysis and prediction tasks rely on.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson, Zipf};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultilayerGraph;
use crate::interaction::{CheckinRecord, HashtagRecord, MentionRecord};

/// Layer names written by the generator.
pub const SOCIAL_LAYER_NAME: &str = "twitter";
pub const MOBILITY_LAYER_NAME: &str = "foursquare";

/// Observation window: 2012-05-01 to 2012-10-01 UTC.
pub const PERIOD_START: i64 = 1_335_830_400;
pub const PERIOD_END: i64 = 1_349_049_600;

/// Interaction-rate multipliers per link class. Multiplex pairs interact
/// the most, unlinked pairs the least.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateMultipliers {
    pub multiplex: f64,
    pub single_layer: f64,
    pub background: f64,
}

impl Default for RateMultipliers {
    fn default() -> Self {
        RateMultipliers {
            multiplex: 1.0,
            single_layer: 0.3,
            background: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub n_users: usize,
    pub n_venues: usize,
    pub city_extent_km: f64,
    /// Target mean degree of the base friendship graph (ring lattice order).
    pub mean_degree: f64,
    /// Fraction of base edges promoted to multiplex links.
    pub multiplex_fraction: f64,
    /// Probability that an edge's promotion is decided by the endpoints'
    /// engagement flags rather than an independent coin.
    pub engagement_mix: f64,
    /// Probability of rewiring each lattice edge to a random endpoint.
    pub rewire_prob: f64,
    pub rates: RateMultipliers,
    /// Expected events per multiplex link, before the class multiplier.
    pub mention_rate: f64,
    pub hashtag_rate: f64,
    pub coloc_rate: f64,
    /// Expected casual contacts per user; these pairs (mostly unlinked)
    /// interact at the background multiplier.
    pub casual_contacts_per_user: f64,
    /// Expected solo check-ins per user (Poisson mean).
    pub checkins_per_user: f64,
    /// Expected solo hashtag usages per user, drawn from the global pool.
    pub solo_tags_per_user: f64,
    pub hashtag_vocab: usize,
    pub zipf_exponent: f64,
    /// Gaussian jitter applied to home placement, km.
    pub home_jitter_km: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_users: 2000,
            n_venues: 300,
            city_extent_km: 40.0,
            mean_degree: 6.0,
            multiplex_fraction: 0.4,
            engagement_mix: 0.7,
            rewire_prob: 0.3,
            rates: RateMultipliers::default(),
            mention_rate: 1.5,
            hashtag_rate: 1.2,
            coloc_rate: 1.5,
            casual_contacts_per_user: 2.0,
            checkins_per_user: 12.0,
            solo_tags_per_user: 6.0,
            hashtag_vocab: 1500,
            zipf_exponent: 1.1,
            home_jitter_km: 6.0,
            seed: 42,
        }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadGenConfig(msg));
        if self.n_users < 4 {
            return bad(format!("n_users must be at least 4, got {}", self.n_users));
        }
        if self.n_venues == 0 {
            return bad("n_venues must be positive".into());
        }
        if self.mean_degree < 2.0 {
            return bad(format!(
                "mean_degree must be at least 2, got {}",
                self.mean_degree
            ));
        }
        if self.mean_degree >= self.n_users as f64 {
            return bad(format!(
                "mean_degree {} must be smaller than n_users {}",
                self.mean_degree, self.n_users
            ));
        }
        if !(0.0..=1.0).contains(&self.multiplex_fraction) {
            return bad(format!(
                "multiplex_fraction must lie in [0, 1], got {}",
                self.multiplex_fraction
            ));
        }
        if !(0.0..=1.0).contains(&self.engagement_mix) {
            return bad("engagement_mix must lie in [0, 1]".into());
        }
        if !(0.0..=1.0).contains(&self.rewire_prob) {
            return bad("rewire_prob must lie in [0, 1]".into());
        }
        let r = &self.rates;
        if r.multiplex < 0.0 || r.single_layer < 0.0 || r.background < 0.0 {
            return bad("rate multipliers must be non-negative".into());
        }
        if !(r.multiplex >= r.single_layer && r.single_layer >= r.background) {
            return bad(format!(
                "rate multipliers must be ordered multiplex >= single_layer >= background, \
                 got {} / {} / {}",
                r.multiplex, r.single_layer, r.background
            ));
        }
        for (name, v) in [
            ("city_extent_km", self.city_extent_km),
            ("mention_rate", self.mention_rate),
            ("hashtag_rate", self.hashtag_rate),
            ("coloc_rate", self.coloc_rate),
            ("casual_contacts_per_user", self.casual_contacts_per_user),
            ("checkins_per_user", self.checkins_per_user),
            ("solo_tags_per_user", self.solo_tags_per_user),
            ("home_jitter_km", self.home_jitter_km),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!(
                    "{name} must be a non-negative finite number, got {v}"
                ));
            }
        }
        if self.city_extent_km <= 0.0 {
            return bad("city_extent_km must be positive".into());
        }
        if self.hashtag_vocab == 0 {
            return bad("hashtag_vocab must be positive".into());
        }
        if self.zipf_exponent <= 0.0 {
            return bad("zipf_exponent must be positive".into());
        }
        Ok(())
    }
}

/// Everything one generator run produces.
#[derive(Debug, Clone)]
pub struct SyntheticDataset {
    pub graph: MultilayerGraph,
    pub checkins: Vec<CheckinRecord>,
    pub mentions: Vec<MentionRecord>,
    pub hashtags: Vec<HashtagRecord>,
    /// (layer index, src, dst) rows exactly as written to an edge file.
    pub edges: Vec<(usize, String, String)>,
    pub layer_names: [&'static str; 2],
}

const CITY_CENTER_LAT: f64 = 40.73;
const CITY_CENTER_LON: f64 = -73.99;
const KM_PER_DEG_LAT: f64 = 110.574;
const NEAR_VENUES: usize = 6;

/// Round a coordinate to ~1e-6 degrees so files stay compact.
fn round_coord(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn to_lat_lon(x_km: f64, y_km: f64) -> (f64, f64) {
    let km_per_deg_lon = 111.320 * CITY_CENTER_LAT.to_radians().cos();
    (
        round_coord(CITY_CENTER_LAT + y_km / KM_PER_DEG_LAT),
        round_coord(CITY_CENTER_LON + x_km / km_per_deg_lon),
    )
}

fn poisson_count(rng: &mut ChaCha8Rng, lambda: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(lambda).expect("validated lambda");
    dist.sample(rng) as usize
}

/// Generate a full synthetic dataset. Deterministic per config.
pub fn generate(cfg: &GenConfig) -> Result<SyntheticDataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_users;

    let user_names: Vec<String> = (0..n).map(|i| format!("u{i:05}")).collect();
    let venue_names: Vec<String> = (0..cfg.n_venues).map(|i| format!("v{i:05}")).collect();

    // Venues uniform over the city square.
    let half = cfg.city_extent_km / 2.0;
    let venue_xy: Vec<(f64, f64)> = (0..cfg.n_venues)
        .map(|_| (rng.gen_range(-half..half), rng.gen_range(-half..half)))
        .collect();
    let venue_coords: Vec<(f64, f64)> = venue_xy.iter().map(|&(x, y)| to_lat_lon(x, y)).collect();

    // Homes near a ring through the city, so ring-lattice friends live close
    // to each other and unrelated pairs usually do not.
    let jitter = Normal::new(0.0, cfg.home_jitter_km.max(1e-9)).expect("valid std dev");
    let ring_radius = cfg.city_extent_km * 0.35;
    let homes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            (
                ring_radius * theta.cos() + jitter.sample(&mut rng),
                ring_radius * theta.sin() + jitter.sample(&mut rng),
            )
        })
        .collect();

    // Per user: the NEAR_VENUES closest venues, used for solo check-ins.
    let near_venues: Vec<Vec<usize>> = homes
        .iter()
        .map(|&(hx, hy)| {
            let mut order: Vec<usize> = (0..cfg.n_venues).collect();
            order.sort_by(|&a, &b| {
                let da = dist2(venue_xy[a], (hx, hy));
                let db = dist2(venue_xy[b], (hx, hy));
                da.partial_cmp(&db).expect("finite").then(a.cmp(&b))
            });
            order.truncate(NEAR_VENUES.min(cfg.n_venues));
            order
        })
        .collect();

    // Base friendship graph: ring lattice of order k with rewiring.
    let k = ((cfg.mean_degree / 2.0).round() as usize).max(1);
    let mut base: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 0..n {
        for d in 1..=k {
            let j = (i + d) % n;
            if i as u32 == j as u32 {
                continue;
            }
            let mut edge = ordered(i as u32, j as u32);
            if rng.gen_bool(cfg.rewire_prob) {
                // Rewire the far endpoint to a uniform random node.
                for _ in 0..32 {
                    let t = rng.gen_range(0..n) as u32;
                    if t != i as u32 && !base.contains(&ordered(i as u32, t)) {
                        edge = ordered(i as u32, t);
                        break;
                    }
                }
            }
            base.insert(edge);
        }
    }

    // Engagement flags: a user active on both networks with prob sqrt(mu).
    let p_engaged = cfg.multiplex_fraction.sqrt();
    let engaged: Vec<bool> = (0..n).map(|_| rng.gen_bool(p_engaged)).collect();

    // Promote edges to multiplex or assign to a single layer.
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut link_class: Vec<((u32, u32), LinkClass)> = Vec::new();
    for &(a, b) in &base {
        let multiplex = if rng.gen_bool(cfg.engagement_mix) {
            engaged[a as usize] && engaged[b as usize]
        } else {
            rng.gen_bool(cfg.multiplex_fraction)
        };
        let (src, dst) = (
            user_names[a as usize].clone(),
            user_names[b as usize].clone(),
        );
        if multiplex {
            edges.push((0, src.clone(), dst.clone()));
            edges.push((1, src, dst));
            link_class.push(((a, b), LinkClass::Multiplex));
        } else {
            let layer = usize::from(rng.gen_bool(0.5));
            edges.push((layer, src, dst));
            link_class.push(((a, b), LinkClass::SingleLayer));
        }
    }

    let (graph, _) = MultilayerGraph::build(
        &[
            SOCIAL_LAYER_NAME.to_string(),
            MOBILITY_LAYER_NAME.to_string(),
        ],
        &user_names,
        &edges,
    )?;

    // Event streams.
    let mut checkins: Vec<CheckinRecord> = Vec::new();
    let mut mentions: Vec<MentionRecord> = Vec::new();
    let mut hashtags: Vec<HashtagRecord> = Vec::new();
    let zipf = Zipf::new(cfg.hashtag_vocab as u64, cfg.zipf_exponent)
        .map_err(|e| Error::BadGenConfig(format!("hashtag distribution: {e}")))?;

    // Solo activity: check-ins near home and hashtags from the global pool.
    for u in 0..n {
        for _ in 0..poisson_count(&mut rng, cfg.checkins_per_user) {
            let venue = near_venues[u][rng.gen_range(0..near_venues[u].len())];
            let (lat, lon) = venue_coords[venue];
            checkins.push(CheckinRecord {
                user: user_names[u].clone(),
                venue: venue_names[venue].clone(),
                lat,
                lon,
                timestamp: rng.gen_range(PERIOD_START..PERIOD_END),
            });
        }
        for _ in 0..poisson_count(&mut rng, cfg.solo_tags_per_user) {
            let tag = zipf.sample(&mut rng) as u64;
            hashtags.push(HashtagRecord {
                user: user_names[u].clone(),
                tag: format!("tag{tag}"),
                timestamp: rng.gen_range(PERIOD_START..PERIOD_END),
            });
        }
    }

    // Planted pair events for linked pairs, scaled by link class.
    for &((a, b), class) in &link_class {
        let mult = match class {
            LinkClass::Multiplex => cfg.rates.multiplex,
            LinkClass::SingleLayer => cfg.rates.single_layer,
        };
        emit_pair_events(
            &mut rng,
            cfg,
            (a as usize, b as usize),
            mult,
            &user_names,
            &homes,
            &venue_xy,
            &zipf,
            &mut checkins,
            &mut mentions,
            &mut hashtags,
        );
    }

    // Casual contacts: random pairs (almost always unlinked) interacting at
    // the background multiplier. This is the noise floor for the
    // "unconnected" class.
    if cfg.rates.background > 0.0 {
        for u in 0..n {
            for _ in 0..poisson_count(&mut rng, cfg.casual_contacts_per_user) {
                let v = rng.gen_range(0..n);
                if v == u {
                    continue;
                }
                emit_pair_events(
                    &mut rng,
                    cfg,
                    (u, v),
                    cfg.rates.background,
                    &user_names,
                    &homes,
                    &venue_xy,
                    &zipf,
                    &mut checkins,
                    &mut mentions,
                    &mut hashtags,
                );
            }
        }
    }

    Ok(SyntheticDataset {
        graph,
        checkins,
        mentions,
        hashtags,
        edges,
        layer_names: [SOCIAL_LAYER_NAME, MOBILITY_LAYER_NAME],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LinkClass {
    Multiplex,
    SingleLayer,
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    dx * dx + dy * dy
}

#[allow(clippy::too_many_arguments)]
fn emit_pair_events(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    (a, b): (usize, usize),
    mult: f64,
    user_names: &[String],
    homes: &[(f64, f64)],
    venue_xy: &[(f64, f64)],
    zipf: &Zipf<f64>,
    checkins: &mut Vec<CheckinRecord>,
    mentions: &mut Vec<MentionRecord>,
    hashtags: &mut Vec<HashtagRecord>,
) {
    // Mentions: random direction per event.
    for _ in 0..poisson_count(rng, cfg.mention_rate * mult) {
        let (src, dst) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        mentions.push(MentionRecord {
            source: user_names[src].clone(),
            target: user_names[dst].clone(),
            timestamp: rng.gen_range(PERIOD_START..PERIOD_END),
        });
    }

    // Shared hashtags: both users post the same tag.
    for _ in 0..poisson_count(rng, cfg.hashtag_rate * mult) {
        let tag = format!("tag{}", zipf.sample(rng) as u64);
        for &u in &[a, b] {
            hashtags.push(HashtagRecord {
                user: user_names[u].clone(),
                tag: tag.clone(),
                timestamp: rng.gen_range(PERIOD_START..PERIOD_END),
            });
        }
    }

    // Colocations: both check in at the venue nearest the pair's midpoint,
    // within half an hour of each other.
    let n_colocs = poisson_count(rng, cfg.coloc_rate * mult);
    if n_colocs > 0 {
        let mid = (
            (homes[a].0 + homes[b].0) / 2.0,
            (homes[a].1 + homes[b].1) / 2.0,
        );
        let venue = (0..venue_xy.len())
            .min_by(|&x, &y| {
                dist2(venue_xy[x], mid)
                    .partial_cmp(&dist2(venue_xy[y], mid))
                    .expect("finite")
                    .then(x.cmp(&y))
            })
            .expect("at least one venue");
        let (lat, lon) = {
            let (x, y) = venue_xy[venue];
            to_lat_lon(x, y)
        };
        for _ in 0..n_colocs {
            let t = rng.gen_range(PERIOD_START..(PERIOD_END - 3600));
            let offset = rng.gen_range(-1800..=1800);
            for (u, tu) in [(a, t), (b, t + offset)] {
                checkins.push(CheckinRecord {
                    user: user_names[u].clone(),
                    venue: format!("v{venue:05}"),
                    lat,
                    lon,
                    timestamp: tu,
                });
            }
        }
    }
}
