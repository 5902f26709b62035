#include "shiplab/ddpg.hpp"

#include <algorithm>
#include <cmath>

namespace shiplab {

void DdpgConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("DdpgConfig: ") + what);
  };
  require(lr > 0.0, "lr must be > 0");
  require(actor_lr >= 0.0, "actor_lr must be >= 0");
  require(action_l2 >= 0.0, "action_l2 must be >= 0");
  require(gamma > 0.0 && gamma < 1.0, "gamma must be in (0, 1)");
  require(batch > 0, "batch must be > 0");
  require(tau > 0.0 && tau <= 1.0, "tau must be in (0, 1]");
  require(noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(update_every > 0, "update_every must be > 0");
  require(total_steps >= 0, "total_steps must be >= 0");
  require(warmup_steps >= 0, "warmup_steps must be >= 0");
  require(buffer_capacity > std::size_t(batch),
          "buffer_capacity must exceed the batch size");
  require(!hidden.empty(), "need at least one hidden layer");
  for (int n : hidden) require(n > 0, "hidden sizes must be > 0");
}

Eigen::Vector4d ObsNormalizer::apply(const Eigen::Vector4d& raw) const {
  return {std::clamp(raw[0], -d_c_clip, d_c_clip), raw[1] / chi_scale,
          raw[2] / d_wp_scale, raw[3] / r_scale};
}

DdpgAgent DdpgAgent::make(const DdpgConfig& cfg, std::uint64_t master_seed) {
  cfg.validate();
  DdpgAgent agent{.config = cfg,
                  .normalizer = {},
                  .action_limit = kMaxRudder,
                  .actor = {},
                  .critic = {},
                  .actor_target = {},
                  .critic_target = {},
                  .adam = AdamConfig{.lr = cfg.lr},
                  .actor_opt = {},
                  .critic_opt = {},
                  .buffer = ReplayBuffer(cfg.buffer_capacity),
                  .noise_rng = RngStream::named(master_seed, "noise"),
                  .sample_rng = RngStream::named(master_seed, "sample"),
                  .step_count = 0};

  std::vector<int> actor_sizes{4};
  actor_sizes.insert(actor_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  actor_sizes.push_back(1);
  std::vector<int> critic_sizes{5};
  critic_sizes.insert(critic_sizes.end(), cfg.hidden.begin(),
                      cfg.hidden.end());
  critic_sizes.push_back(1);

  RngStream init = RngStream::named(master_seed, "init");
  agent.actor = Mlp::random_init(actor_sizes, OutputKind::tanh_scaled,
                                 agent.action_limit, init, 1e-3);
  agent.critic = Mlp::random_init(critic_sizes, OutputKind::linear, 1.0, init);
  agent.actor_target = agent.actor;
  agent.critic_target = agent.critic;
  agent.actor_opt = AdamState::like(agent.actor);
  agent.critic_opt = AdamState::like(agent.critic);
  return agent;
}

double DdpgAgent::act(const Eigen::Vector4d& raw_obs) const {
  Eigen::MatrixXd input = normalizer.apply(raw_obs).transpose();
  return actor.forward(input)(0, 0);
}

double DdpgAgent::act_noisy(const Eigen::Vector4d& raw_obs) {
  const double a =
      act(raw_obs) + noise_rng.normal(config.noise_mu, config.noise_sigma);
  return std::clamp(a, -action_limit, action_limit);
}

double td_target(double reward, double q_next, bool done, double gamma) {
  return reward + gamma * (done ? 0.0 : 1.0) * q_next;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (!target.same_architecture(online))
    throw std::invalid_argument("soft_update: architecture mismatch");
  for (std::size_t i = 0; i < target.layers().size(); ++i) {
    target.layers()[i].W =
        tau * online.layers()[i].W + (1.0 - tau) * target.layers()[i].W;
    target.layers()[i].b =
        tau * online.layers()[i].b + (1.0 - tau) * target.layers()[i].b;
  }
}

namespace {

bool grads_finite(const std::vector<Layer>& grads) {
  for (const Layer& g : grads)
    if (!g.W.allFinite() || !g.b.allFinite()) return false;
  return true;
}

}  // namespace

UpdateStats ddpg_update(DdpgAgent& agent,
                        const std::vector<Transition>& batch) {
  if (batch.empty())
    throw std::invalid_argument("ddpg_update: empty batch");
  const Eigen::Index n = Eigen::Index(batch.size());

  Eigen::MatrixXd s(n, 4), s_next(n, 4);
  Eigen::VectorXd a(n), r(n), not_done(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = batch[i];
    s.row(i) = agent.normalizer.apply(t.s).transpose();
    s_next.row(i) = agent.normalizer.apply(t.s_next).transpose();
    a(i) = t.a;
    r(i) = t.r;
    not_done(i) = t.done ? 0.0 : 1.0;
  }

  // TD targets from the frozen copies.
  Eigen::MatrixXd critic_in_next(n, 5);
  critic_in_next.leftCols(4) = s_next;
  critic_in_next.col(4) =
      agent.actor_target.forward(s_next) / agent.action_limit;
  const Eigen::VectorXd q_next = agent.critic_target.forward(critic_in_next);
  const Eigen::VectorXd y =
      r.array() + agent.config.gamma * not_done.array() * q_next.array();

  // Critic regression.
  Eigen::MatrixXd critic_in(n, 5);
  critic_in.leftCols(4) = s;
  critic_in.col(4) = a / agent.action_limit;
  Mlp::Cache critic_cache;
  const Eigen::VectorXd q = agent.critic.forward(critic_in, critic_cache);
  const Eigen::VectorXd diff = q - y;
  UpdateStats stats;
  stats.critic_loss = diff.squaredNorm() / double(n);
  const Eigen::MatrixXd dloss_dq = (2.0 / double(n)) * diff;
  const Mlp::Grads critic_grads =
      agent.critic.backward(critic_cache, dloss_dq);
  if (!std::isfinite(stats.critic_loss) || !grads_finite(critic_grads.layers))
    throw TrainingDiverged("non-finite critic loss or gradient at step " +
                           std::to_string(agent.step_count));
  adam_step(agent.critic, critic_grads.layers, agent.critic_opt, agent.adam);

  // Actor ascent on the updated critic, gradient through the action input.
  Mlp::Cache actor_cache;
  const Eigen::MatrixXd pi = agent.actor.forward(s, actor_cache);
  Eigen::MatrixXd critic_in_pi(n, 5);
  critic_in_pi.leftCols(4) = s;
  critic_in_pi.col(4) = pi / agent.action_limit;
  Mlp::Cache value_cache;
  const Eigen::VectorXd q_pi =
      agent.critic.forward(critic_in_pi, value_cache);
  stats.actor_objective = q_pi.mean();
  const Eigen::MatrixXd dneg_dq =
      Eigen::MatrixXd::Constant(n, 1, -1.0 / double(n));
  const Mlp::Grads through_critic =
      agent.critic.backward(value_cache, dneg_dq);
  Eigen::MatrixXd dloss_dpi =
      through_critic.input.col(4) / agent.action_limit;
  if (agent.config.action_l2 > 0.0)
    dloss_dpi += (2.0 * agent.config.action_l2 /
                  (double(n) * agent.action_limit * agent.action_limit)) *
                 pi;
  const Mlp::Grads actor_grads = agent.actor.backward(actor_cache, dloss_dpi);
  if (!std::isfinite(stats.actor_objective) ||
      !grads_finite(actor_grads.layers))
    throw TrainingDiverged("non-finite actor objective or gradient at step " +
                           std::to_string(agent.step_count));
  AdamConfig actor_adam = agent.adam;
  if (agent.config.actor_lr > 0.0) actor_adam.lr = agent.config.actor_lr;
  adam_step(agent.actor, actor_grads.layers, agent.actor_opt, actor_adam);

  soft_update(agent.actor_target, agent.actor, agent.config.tau);
  soft_update(agent.critic_target, agent.critic, agent.config.tau);
  return stats;
}

TrainingLog train(DdpgAgent& agent, WaypointEnv& env, RngStream& env_rng,
                  const TrainOptions& opts) {
  TrainingLog log;
  if (agent.step_count >= agent.config.total_steps) return log;

  if (opts.episode_begin) opts.episode_begin(env);
  Observation obs = env.reset(env_rng);
  double episode_return = 0.0;
  int episode_index = 0;

  while (agent.step_count < agent.config.total_steps) {
    ++agent.step_count;
    const double action =
        agent.step_count <= agent.config.warmup_steps
            ? agent.noise_rng.uniform(-agent.action_limit, agent.action_limit)
            : agent.act_noisy(obs.vector());
    const StepResult result = env.step(action);
    agent.buffer.push({obs.vector(), action, result.reward,
                       result.observation.vector(), result.done});
    episode_return += result.reward;

    if (result.done) {
      log.episodes.push_back({episode_index++, episode_return,
                              env.steps_used(), result.outcome,
                              agent.step_count});
      episode_return = 0.0;
      if (opts.episode_begin) opts.episode_begin(env);
      obs = env.reset(env_rng);
    } else {
      obs = result.observation;
    }

    if (agent.buffer.size() >= std::size_t(agent.config.batch) &&
        agent.step_count % agent.config.update_every == 0) {
      const std::vector<Transition> batch =
          agent.buffer.sample(std::size_t(agent.config.batch),
                              agent.sample_rng);
      try {
        const UpdateStats stats = ddpg_update(agent, batch);
        log.updates.push_back(
            {agent.step_count, stats.critic_loss, stats.actor_objective});
      } catch (const TrainingDiverged&) {
        if (opts.checkpoint_sink) opts.checkpoint_sink(agent, log);
        throw;
      }
    }

    if (opts.checkpoint_every > 0 && opts.checkpoint_sink &&
        agent.step_count % opts.checkpoint_every == 0)
      opts.checkpoint_sink(agent, log);
    if (opts.progress_every > 0 && opts.progress &&
        agent.step_count % opts.progress_every == 0)
      opts.progress(log, agent.step_count);
  }
  return log;
}

}  // namespace shiplab
