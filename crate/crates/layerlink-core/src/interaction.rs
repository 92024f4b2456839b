//! Event-derived pair features: mentions, common hashtags, venue
//! colocations, distance between most-frequented locations, and the two
//! combined cross-layer features (similarity over distance, global
//! interaction).
//!
//! All indices are built once from raw records and are immutable afterwards;
//! the per-pair lookups are pure and can run concurrently.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::haversine_km;

/// One check-in: a user visiting a venue at a point in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckinRecord {
    pub user: String,
    pub venue: String,
    pub lat: f64,
    pub lon: f64,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
}

/// One user mentioning another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionRecord {
    pub source: String,
    pub target: String,
    pub timestamp: i64,
}

/// One hashtag usage. Tags are stored lowercase without the leading `#`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagRecord {
    pub user: String,
    pub tag: String,
    pub timestamp: i64,
}

/// Default colocation window: one hour.
pub const DEFAULT_COLOC_WINDOW_SECS: i64 = 3600;

/// Floor applied to the distance denominator in
/// [`similarity_over_distance`], in kilometres.
pub const MIN_DISTANCE_KM: f64 = 0.1;

/// Default exponents of the similarity-over-distance feature.
pub const DEFAULT_SIM_EXPONENT: f64 = 2.0;
pub const DEFAULT_DIST_EXPONENT: f64 = 1.0;

/// Symmetric mention counts per unordered user pair.
#[derive(Debug, Clone, Default)]
pub struct MentionIndex {
    counts: HashMap<(String, String), u64>,
    pub self_mentions_dropped: usize,
}

impl MentionIndex {
    pub fn build(records: &[MentionRecord]) -> Self {
        let mut counts: HashMap<(String, String), u64> = HashMap::new();
        let mut dropped = 0;
        for r in records {
            if r.source == r.target {
                dropped += 1;
                continue;
            }
            let key = if r.source < r.target {
                (r.source.clone(), r.target.clone())
            } else {
                (r.target.clone(), r.source.clone())
            };
            *counts.entry(key).or_insert(0) += 1;
        }
        MentionIndex {
            counts,
            self_mentions_dropped: dropped,
        }
    }

    /// Mentions i -> j plus j -> i.
    pub fn count(&self, i: &str, j: &str) -> u64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.counts
            .get(&(key.0.to_string(), key.1.to_string()))
            .copied()
            .unwrap_or(0)
    }
}

/// Distinct hashtag sets per user, interned.
#[derive(Debug, Clone, Default)]
pub struct HashtagIndex {
    tag_ids: HashMap<String, u32>,
    user_tags: HashMap<String, Vec<u32>>,
}

impl HashtagIndex {
    pub fn build(records: &[HashtagRecord]) -> Self {
        let mut tag_ids: HashMap<String, u32> = HashMap::new();
        let mut user_tags: HashMap<String, HashSet<u32>> = HashMap::new();
        for r in records {
            let tag = r.tag.to_lowercase();
            if tag.is_empty() {
                continue;
            }
            let next = tag_ids.len() as u32;
            let id = *tag_ids.entry(tag).or_insert(next);
            user_tags.entry(r.user.clone()).or_default().insert(id);
        }
        let user_tags = user_tags
            .into_iter()
            .map(|(user, set)| {
                let mut v: Vec<u32> = set.into_iter().collect();
                v.sort_unstable();
                (user, v)
            })
            .collect();
        HashtagIndex { tag_ids, user_tags }
    }

    pub fn distinct_tag_count(&self) -> usize {
        self.tag_ids.len()
    }

    /// Number of distinct tags used by both users.
    pub fn common(&self, i: &str, j: &str) -> u64 {
        let (Some(a), Some(b)) = (self.user_tags.get(i), self.user_tags.get(j)) else {
            return 0;
        };
        let (mut x, mut y, mut n) = (0, 0, 0u64);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        n
    }
}

/// Per-venue coordinates, popularity and time-sorted visits, plus per-user
/// visit structures for colocation and most-frequented-location queries.
#[derive(Debug, Clone, Default)]
pub struct VenueIndex {
    venue_names: Vec<String>,
    venue_ids: HashMap<String, u32>,
    coords: Vec<(f64, f64)>,
    /// Per venue: all (user, timestamp) visits, sorted by time.
    visits: Vec<Vec<(String, i64)>>,
    /// Per user: venue id -> sorted visit times.
    user_visits: HashMap<String, BTreeMap<u32, Vec<i64>>>,
}

impl VenueIndex {
    /// Index a check-in stream. Rejects a venue id that appears with two
    /// different coordinate pairs.
    pub fn build(records: &[CheckinRecord]) -> Result<Self> {
        let mut idx = VenueIndex::default();
        for r in records {
            let vid = match idx.venue_ids.get(&r.venue) {
                Some(&vid) => {
                    let (lat, lon) = idx.coords[vid as usize];
                    if lat != r.lat || lon != r.lon {
                        return Err(Error::VenueCoordConflict(r.venue.clone()));
                    }
                    vid
                }
                None => {
                    let vid = idx.venue_names.len() as u32;
                    idx.venue_names.push(r.venue.clone());
                    idx.venue_ids.insert(r.venue.clone(), vid);
                    idx.coords.push((r.lat, r.lon));
                    idx.visits.push(Vec::new());
                    vid
                }
            };
            idx.visits[vid as usize].push((r.user.clone(), r.timestamp));
            idx.user_visits
                .entry(r.user.clone())
                .or_default()
                .entry(vid)
                .or_default()
                .push(r.timestamp);
        }
        for visits in &mut idx.visits {
            visits.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        }
        for per_user in idx.user_visits.values_mut() {
            for times in per_user.values_mut() {
                times.sort_unstable();
            }
        }
        Ok(idx)
    }

    pub fn venue_count(&self) -> usize {
        self.venue_names.len()
    }

    /// Total visits at a venue, by anyone.
    pub fn popularity(&self, venue: u32) -> usize {
        self.visits[venue as usize].len()
    }

    pub fn user_checkin_count(&self, user: &str) -> usize {
        self.user_visits
            .get(user)
            .map(|m| m.values().map(Vec::len).sum())
            .unwrap_or(0)
    }

    /// Colocations of `i` and `j`: check-in pairs at the same venue within
    /// `window` seconds, matched greedily in time order so each check-in is
    /// used at most once, each weighted by `1 / ln(1 + popularity(venue))`.
    pub fn colocations(&self, i: &str, j: &str, window: i64) -> f64 {
        let mut total = 0.0;
        self.for_each_colocation(i, j, window, |venue, _, _| {
            total += 1.0 / (1.0 + self.popularity(venue) as f64).ln();
        });
        total
    }

    /// Same matching as [`colocations`](Self::colocations) but unweighted.
    pub fn colocation_count(&self, i: &str, j: &str, window: i64) -> usize {
        let mut n = 0;
        self.for_each_colocation(i, j, window, |_, _, _| n += 1);
        n
    }

    fn for_each_colocation<F: FnMut(u32, i64, i64)>(
        &self,
        i: &str,
        j: &str,
        window: i64,
        mut f: F,
    ) {
        if i == j {
            return;
        }
        let (Some(vi), Some(vj)) = (self.user_visits.get(i), self.user_visits.get(j)) else {
            return;
        };
        // Iterate the smaller venue map, probing the other.
        let (small, big) = if vi.len() <= vj.len() {
            (vi, vj)
        } else {
            (vj, vi)
        };
        for (&venue, a_times) in small {
            let Some(b_times) = big.get(&venue) else {
                continue;
            };
            let (mut x, mut y) = (0, 0);
            while x < a_times.len() && y < b_times.len() {
                let (ta, tb) = (a_times[x], b_times[y]);
                if (ta - tb).abs() <= window {
                    f(venue, ta.min(tb), ta.max(tb));
                    x += 1;
                    y += 1;
                } else if ta < tb {
                    x += 1;
                } else {
                    y += 1;
                }
            }
        }
    }

    /// Coordinates of the user's most visited venue, or `None` when the user
    /// has two or fewer check-ins in total. Ties break on the smallest venue
    /// id string.
    pub fn most_frequent_location(&self, user: &str) -> Option<(f64, f64)> {
        let per_user = self.user_visits.get(user)?;
        let total: usize = per_user.values().map(Vec::len).sum();
        if total <= 2 {
            return None;
        }
        let best = per_user
            .iter()
            .map(|(&vid, times)| (vid, times.len()))
            .max_by(|(va, ca), (vb, cb)| {
                ca.cmp(cb).then_with(|| {
                    // More check-ins wins; on a tie the lexicographically
                    // smaller venue name wins, so it must compare greater.
                    self.venue_names[*vb as usize].cmp(&self.venue_names[*va as usize])
                })
            })?;
        Some(self.coords[best.0 as usize])
    }

    /// Haversine distance in km between the two users' most frequented
    /// locations; `None` when either side is undefined.
    pub fn pair_distance(&self, i: &str, j: &str) -> Option<f64> {
        let (lat_i, lon_i) = self.most_frequent_location(i)?;
        let (lat_j, lon_j) = self.most_frequent_location(j)?;
        Some(haversine_km(lat_i, lon_i, lat_j, lon_j))
    }
}

/// `sim^a / max(dist, 0.1 km)^b`. The floor keeps co-located users finite.
pub fn similarity_over_distance(sim_mass: f64, dist_km: f64, a: f64, b: f64) -> Result<f64> {
    if sim_mass < 0.0 {
        return Err(Error::NegativeInput("similarity mass", sim_mass));
    }
    if dist_km < 0.0 {
        return Err(Error::NegativeInput("distance", dist_km));
    }
    if sim_mass == 0.0 {
        return Ok(0.0);
    }
    Ok(sim_mass.powf(a) / dist_km.max(MIN_DISTANCE_KM).powf(b))
}

/// Unweighted sum of per-layer interaction counts.
pub fn global_interaction(per_layer_counts: &[f64]) -> f64 {
    per_layer_counts.iter().map(|c| c.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mention(source: &str, target: &str, timestamp: i64) -> MentionRecord {
        MentionRecord {
            source: source.into(),
            target: target.into(),
            timestamp,
        }
    }

    fn checkin(user: &str, venue: &str, lat: f64, lon: f64, timestamp: i64) -> CheckinRecord {
        CheckinRecord {
            user: user.into(),
            venue: venue.into(),
            lat,
            lon,
            timestamp,
        }
    }

    #[test]
    fn mentions_sum_both_directions() {
        let idx = MentionIndex::build(&[
            mention("i", "j", 1),
            mention("i", "j", 2),
            mention("i", "j", 3),
            mention("j", "i", 4),
            mention("i", "k", 5),
        ]);
        assert_eq!(idx.count("i", "j"), 4);
        assert_eq!(idx.count("j", "i"), 4);
        assert_eq!(idx.count("j", "k"), 0);
    }

    #[test]
    fn self_mentions_dropped() {
        let idx = MentionIndex::build(&[mention("i", "i", 1), mention("i", "j", 2)]);
        assert_eq!(idx.self_mentions_dropped, 1);
        assert_eq!(idx.count("i", "j"), 1);
    }

    #[test]
    fn mentions_match_linear_scan_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let users = ["a", "b", "c", "d", "e"];
        let records: Vec<MentionRecord> = (0..500)
            .map(|t| {
                let s = users[rng.gen_range(0..users.len())];
                let d = users[rng.gen_range(0..users.len())];
                mention(s, d, t)
            })
            .collect();
        let idx = MentionIndex::build(&records);
        for i in users {
            for j in users {
                if i == j {
                    continue;
                }
                let oracle = records
                    .iter()
                    .filter(|r| {
                        (r.source == i && r.target == j) || (r.source == j && r.target == i)
                    })
                    .count() as u64;
                assert_eq!(idx.count(i, j), oracle, "pair {i},{j}");
            }
        }
    }

    #[test]
    fn common_hashtags_counts_distinct_intersection() {
        let recs = [
            ("i", "a"),
            ("i", "b"),
            ("i", "c"),
            ("i", "b"), // repeat must not double count
            ("j", "b"),
            ("j", "c"),
            ("j", "d"),
        ];
        let records: Vec<HashtagRecord> = recs
            .iter()
            .enumerate()
            .map(|(t, (u, tag))| HashtagRecord {
                user: u.to_string(),
                tag: tag.to_string(),
                timestamp: t as i64,
            })
            .collect();
        let idx = HashtagIndex::build(&records);
        assert_eq!(idx.common("i", "j"), 2);
        assert_eq!(idx.common("i", "nobody"), 0);
    }

    #[test]
    fn hashtags_are_lowercased() {
        let records = vec![
            HashtagRecord {
                user: "i".into(),
                tag: "Coffee".into(),
                timestamp: 0,
            },
            HashtagRecord {
                user: "j".into(),
                tag: "coffee".into(),
                timestamp: 1,
            },
        ];
        let idx = HashtagIndex::build(&records);
        assert_eq!(idx.common("i", "j"), 1);
    }

    #[test]
    fn hashtags_match_set_intersection_oracle() {
        use rand::{Rng, SeedableRng};
        use std::collections::HashSet;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let users: Vec<String> = (0..8).map(|i| format!("u{i}")).collect();
        let records: Vec<HashtagRecord> = (0..10_000)
            .map(|t| HashtagRecord {
                user: users[rng.gen_range(0..users.len())].clone(),
                tag: format!("t{}", rng.gen_range(0..60)),
                timestamp: t,
            })
            .collect();
        let idx = HashtagIndex::build(&records);
        for i in &users {
            for j in &users {
                if i >= j {
                    continue;
                }
                let set = |u: &str| -> HashSet<String> {
                    records
                        .iter()
                        .filter(|r| r.user == u)
                        .map(|r| r.tag.clone())
                        .collect()
                };
                let oracle = set(i).intersection(&set(j)).count() as u64;
                assert_eq!(idx.common(i, j), oracle);
            }
        }
    }

    #[test]
    fn colocation_inside_window_weighted_by_popularity() {
        let t = 1_000_000;
        let idx = VenueIndex::build(&[
            checkin("i", "v", 1.0, 2.0, t),
            checkin("j", "v", 1.0, 2.0, t + 1800),
            checkin("x", "v", 1.0, 2.0, t + 9999),
            checkin("y", "v", 1.0, 2.0, t + 99999),
        ])
        .unwrap();
        // Popularity of v is 4 total visits.
        let got = idx.colocations("i", "j", DEFAULT_COLOC_WINDOW_SECS);
        assert!((got - 1.0 / 5.0f64.ln()).abs() < 1e-12);
        assert_eq!(idx.colocation_count("i", "j", DEFAULT_COLOC_WINDOW_SECS), 1);
    }

    #[test]
    fn colocation_outside_window_is_zero() {
        let t = 1_000_000;
        let idx = VenueIndex::build(&[
            checkin("i", "v", 1.0, 2.0, t),
            checkin("j", "v", 1.0, 2.0, t + 5400),
        ])
        .unwrap();
        assert_eq!(idx.colocations("i", "j", DEFAULT_COLOC_WINDOW_SECS), 0.0);
    }

    #[test]
    fn colocation_greedy_uses_each_checkin_once() {
        let t = 1_000_000;
        // i checks in once; j twice within the window. Only one match.
        let idx = VenueIndex::build(&[
            checkin("i", "v", 1.0, 2.0, t),
            checkin("j", "v", 1.0, 2.0, t + 100),
            checkin("j", "v", 1.0, 2.0, t + 200),
        ])
        .unwrap();
        assert_eq!(idx.colocation_count("i", "j", DEFAULT_COLOC_WINDOW_SECS), 1);
    }

    #[test]
    fn venue_coord_conflict_rejected() {
        let err = VenueIndex::build(&[
            checkin("i", "v", 1.0, 2.0, 0),
            checkin("j", "v", 1.0, 2.5, 1),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::VenueCoordConflict(v) if v == "v"));
    }

    #[test]
    fn most_frequent_location_is_mode() {
        let idx = VenueIndex::build(&[
            checkin("i", "v1", 10.0, 20.0, 0),
            checkin("i", "v1", 10.0, 20.0, 1),
            checkin("i", "v1", 10.0, 20.0, 2),
            checkin("i", "v2", 30.0, 40.0, 3),
        ])
        .unwrap();
        assert_eq!(idx.most_frequent_location("i"), Some((10.0, 20.0)));
    }

    #[test]
    fn two_checkins_is_undefined() {
        let idx = VenueIndex::build(&[
            checkin("i", "v1", 10.0, 20.0, 0),
            checkin("i", "v1", 10.0, 20.0, 1),
        ])
        .unwrap();
        assert_eq!(idx.most_frequent_location("i"), None);
        assert_eq!(idx.most_frequent_location("ghost"), None);
    }

    #[test]
    fn mode_tie_breaks_on_smaller_venue_id() {
        let idx = VenueIndex::build(&[
            checkin("i", "v2", 30.0, 40.0, 0),
            checkin("i", "v2", 30.0, 40.0, 1),
            checkin("i", "v1", 10.0, 20.0, 2),
            checkin("i", "v1", 10.0, 20.0, 3),
        ])
        .unwrap();
        assert_eq!(idx.most_frequent_location("i"), Some((10.0, 20.0)));
    }

    #[test]
    fn pair_distance_identical_and_undefined() {
        let mut recs = Vec::new();
        for t in 0..3 {
            recs.push(checkin("i", "v1", 10.0, 20.0, t));
            recs.push(checkin("j", "v1", 10.0, 20.0, 100 + t));
        }
        recs.push(checkin("k", "v1", 10.0, 20.0, 500));
        let idx = VenueIndex::build(&recs).unwrap();
        assert_eq!(idx.pair_distance("i", "j"), Some(0.0));
        assert_eq!(idx.pair_distance("i", "k"), None);
    }

    #[test]
    fn similarity_over_distance_examples() {
        assert_eq!(similarity_over_distance(4.0, 2.0, 2.0, 1.0).unwrap(), 8.0);
        assert_eq!(similarity_over_distance(0.0, 50.0, 2.0, 1.0).unwrap(), 0.0);
        // Floored denominator at 0.1 km.
        let v = similarity_over_distance(4.0, 0.0, 2.0, 1.0).unwrap();
        assert!((v - 160.0).abs() < 1e-9);
        assert!(similarity_over_distance(-1.0, 1.0, 2.0, 1.0).is_err());
        assert!(similarity_over_distance(1.0, -1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn global_interaction_sums_layers() {
        assert_eq!(global_interaction(&[3.0, 5.0]), 8.0);
        assert_eq!(global_interaction(&[0.0, 0.0]), 0.0);
        assert_eq!(global_interaction(&[]), 0.0);
    }
}
