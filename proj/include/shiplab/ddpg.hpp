#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "shiplab/adam.hpp"
#include "shiplab/env.hpp"
#include "shiplab/mlp.hpp"
#include "shiplab/replay_buffer.hpp"
#include "shiplab/rng.hpp"
#include "shiplab/vessel.hpp"

namespace shiplab {

struct DdpgConfig {
  double lr = 0.0008;
  /// Separate actor step size; 0 means "same as lr". Classic usage trains
  /// the actor slower than the critic so the policy never outruns the value
  /// estimate it is climbing.
  double actor_lr = 0.0;
  /// Weight of an L2 penalty on (action / limit)^2 in the actor objective.
  /// Discourages riding the rudder stops, where the output tanh saturates
  /// and gradient flow dies.
  double action_l2 = 0.0;
  double gamma = 0.97;
  int batch = 32;
  double tau = 0.02;
  double noise_sigma = 0.0698;  ///< rad (4 degrees of rudder)
  double noise_mu = 0.0;
  int update_every = 10;  ///< one critic+actor+target update per N env steps
  long total_steps = 1280000;
  /// Environment steps driven by uniform random rudder commands before the
  /// policy takes over. Seeds the replay buffer with the full action range
  /// so the critic's value landscape is informed away from the initial
  /// near-zero policy; without it the actor reliably drifts onto a rudder
  /// stop it cannot learn its way off (tanh gradient vanishes there).
  long warmup_steps = 10000;
  std::size_t buffer_capacity = 100000;
  std::vector<int> hidden = {64, 64};

  void validate() const;  ///< throws std::invalid_argument

  bool operator==(const DdpgConfig&) const = default;
};

/// Maps raw observations onto the network input scale. The constants travel
/// with the checkpoint so a saved policy is self-describing.
struct ObsNormalizer {
  double d_c_clip = 10.0;   ///< cross-track error clipped to +-this [L]
  double chi_scale = M_PI;  ///< course error divided by pi
  double d_wp_scale = 28.0; ///< destination distance divided by max spawn
  double r_scale = 0.25;    ///< yaw rate divided by a typical hard-turn rate

  Eigen::Vector4d apply(const Eigen::Vector4d& raw) const;

  bool operator==(const ObsNormalizer&) const = default;
};

/// Thrown when a training update produces a non-finite loss or gradient.
/// Updates are validated before parameters are touched, so the agent still
/// holds the last finite state when this propagates.
struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Actor-critic pair with target copies, optimizer state, replay buffer,
/// and the agent-owned RNG streams (exploration noise, batch sampling).
struct DdpgAgent {
  DdpgConfig config;
  ObsNormalizer normalizer;
  double action_limit = kMaxRudder;

  Mlp actor;          ///< obs(4) -> rudder command [rad]
  Mlp critic;         ///< [obs(4), action/limit] -> value
  Mlp actor_target;
  Mlp critic_target;
  AdamConfig adam;
  AdamState actor_opt;
  AdamState critic_opt;

  ReplayBuffer buffer;
  RngStream noise_rng;
  RngStream sample_rng;
  long step_count = 0;  ///< lifetime environment steps taken

  /// Fresh agent: uniform +-1/sqrt(fan_in) init (actor output layer +-1e-3),
  /// targets equal to the online networks, named RNG streams fanned out from
  /// the master seed.
  static DdpgAgent make(const DdpgConfig& cfg, std::uint64_t master_seed);

  /// Deterministic policy action in radians, |a| <= action_limit.
  double act(const Eigen::Vector4d& raw_obs) const;

  /// Policy action plus Gaussian exploration noise, clamped to the limit.
  double act_noisy(const Eigen::Vector4d& raw_obs);
};

/// y = r + gamma (1 - done) q_next.
double td_target(double reward, double q_next, bool done, double gamma);

/// theta_target <- tau theta + (1 - tau) theta_target, elementwise.
/// Throws std::invalid_argument on architecture mismatch.
void soft_update(Mlp& target, const Mlp& online, double tau);

struct UpdateStats {
  double critic_loss = 0.0;      ///< mean squared Bellman error
  double actor_objective = 0.0;  ///< mean critic value of the policy action
};

/// One gradient update on a batch: critic regression to the TD target,
/// actor ascent on the critic value (gradient through the critic's action
/// input), then soft target updates. Throws TrainingDiverged before
/// mutating anything if a loss or gradient is non-finite.
UpdateStats ddpg_update(DdpgAgent& agent,
                        const std::vector<Transition>& batch);

struct TrainingLog {
  struct EpisodeEntry {
    int index = 0;
    double episode_return = 0.0;  ///< sum of per-step rewards incl. bonus
    int steps = 0;
    Outcome outcome = Outcome::running;
    long end_step = 0;  ///< lifetime step count when the episode ended
  };
  struct UpdateEntry {
    long step = 0;
    double critic_loss = 0.0;
    double actor_objective = 0.0;
  };
  std::vector<EpisodeEntry> episodes;
  std::vector<UpdateEntry> updates;
};

struct TrainOptions {
  long checkpoint_every = 0;  ///< 0 disables periodic snapshots
  std::function<void(const DdpgAgent&, const TrainingLog&)> checkpoint_sink;
  long progress_every = 0;
  std::function<void(const TrainingLog&, long step)> progress;
  /// Invoked before every episode reset (including the first). Curricula
  /// hook in here, e.g. randomized wind via env.set_wind; any randomness
  /// must come from a stream the caller owns to keep runs reproducible.
  std::function<void(WaypointEnv& env)> episode_begin;
};

/// Runs the interaction loop until agent.step_count reaches
/// config.total_steps: act with noise, store the transition, and every
/// update_every steps (once the buffer covers a batch) perform one
/// ddpg_update. Logs finished episodes and every update. On divergence the
/// checkpoint sink fires with the last finite state, then the exception
/// propagates.
TrainingLog train(DdpgAgent& agent, WaypointEnv& env, RngStream& env_rng,
                  const TrainOptions& opts = {});

}  // namespace shiplab
