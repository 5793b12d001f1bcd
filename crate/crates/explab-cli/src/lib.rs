//! Library surface behind the `explab` binary. The reproduce targets and
//! sweep engine live here so the acceptance suite can drive them directly
//! instead of shelling out.

pub mod reproduce;
pub mod sweep;

use explab_core::history::{Action, Player, PublicHistory};
use explab_core::profiles::Profile;

/// Versioned header line prepended to every CSV artifact.
pub const CSV_HEADER: &str = "# format: explab/1";

/// Both observers' posteriors, opponent-success weights, and the update
/// provenance for every history up to `depth`, in breadth-first order.
pub fn beliefs_csv(profile: &Profile, depth: usize) -> String {
    let params = &profile.params;
    let mut out = format!("{CSV_HEADER}\nhistory,p1,p2,q1,q2,provenance\n");
    let mut level = vec![PublicHistory::empty()];
    for d in 0..=depth {
        for h in &level {
            let nb = profile.beliefs(h);
            // the informative update at a node belongs to whoever watched
            // the last move; the mover's own-failure step is plain Bayes
            let prov = match h.parent() {
                None => "prior",
                Some((up, _)) => nb.prov[up.active_player().other().index()].label(),
            };
            let name = if h.len() == 0 { "-".to_string() } else { h.render() };
            out.push_str(&format!(
                "{},{:.12},{:.12},{:.12},{:.12},{}\n",
                name,
                nb.p(Player::P1, params),
                nb.p(Player::P2, params),
                nb.q(Player::P1),
                nb.q(Player::P2),
                prov
            ));
        }
        if d == depth {
            break;
        }
        level = level
            .iter()
            .flat_map(|h| [Action::R, Action::S].map(|a| h.extend(a).unwrap()))
            .collect();
    }
    out
}
