#include "shiplab/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace shiplab {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'H', 'P', 'L', 'C', 'K', 'P', '1'};

void append_doubles_net(std::vector<double>& out, const Mlp& net) {
  for (const Layer& l : net.layers()) {
    for (Eigen::Index i = 0; i < l.W.rows(); ++i)
      for (Eigen::Index j = 0; j < l.W.cols(); ++j)
        out.push_back(l.W(i, j));
    for (Eigen::Index i = 0; i < l.b.size(); ++i) out.push_back(l.b(i));
  }
}

void append_doubles_opt(std::vector<double>& out, const AdamState& opt) {
  for (const std::vector<Layer>* part : {&opt.m, &opt.v}) {
    for (const Layer& l : *part) {
      for (Eigen::Index i = 0; i < l.W.rows(); ++i)
        for (Eigen::Index j = 0; j < l.W.cols(); ++j)
          out.push_back(l.W(i, j));
      for (Eigen::Index i = 0; i < l.b.size(); ++i) out.push_back(l.b(i));
    }
  }
}

class DoubleReader {
 public:
  DoubleReader(const double* data, std::size_t count)
      : data_(data), count_(count) {}

  double next() {
    if (used_ == count_)
      throw CheckpointError("checkpoint: parameter block shorter than the "
                            "header promises");
    return data_[used_++];
  }

  void fill_net(Mlp& net) {
    for (Layer& l : net.layers()) {
      for (Eigen::Index i = 0; i < l.W.rows(); ++i)
        for (Eigen::Index j = 0; j < l.W.cols(); ++j) l.W(i, j) = next();
      for (Eigen::Index i = 0; i < l.b.size(); ++i) l.b(i) = next();
    }
  }

  void fill_opt(AdamState& opt) {
    for (std::vector<Layer>* part : {&opt.m, &opt.v}) {
      for (Layer& l : *part) {
        for (Eigen::Index i = 0; i < l.W.rows(); ++i)
          for (Eigen::Index j = 0; j < l.W.cols(); ++j) l.W(i, j) = next();
        for (Eigen::Index i = 0; i < l.b.size(); ++i) l.b(i) = next();
      }
    }
  }

  std::size_t used() const { return used_; }

 private:
  const double* data_;
  std::size_t count_;
  std::size_t used_ = 0;
};

}  // namespace

std::string checkpoint_bytes(const DdpgAgent& agent) {
  std::vector<double> blob;
  append_doubles_net(blob, agent.actor);
  append_doubles_net(blob, agent.critic);
  append_doubles_net(blob, agent.actor_target);
  append_doubles_net(blob, agent.critic_target);
  append_doubles_opt(blob, agent.actor_opt);
  append_doubles_opt(blob, agent.critic_opt);

  json header;
  header["format"] = 1;
  header["config"] = {{"lr", agent.config.lr},
                      {"gamma", agent.config.gamma},
                      {"batch", agent.config.batch},
                      {"tau", agent.config.tau},
                      {"noise_sigma", agent.config.noise_sigma},
                      {"noise_mu", agent.config.noise_mu},
                      {"update_every", agent.config.update_every},
                      {"total_steps", agent.config.total_steps},
                      {"warmup_steps", agent.config.warmup_steps},
                      {"actor_lr", agent.config.actor_lr},
                      {"action_l2", agent.config.action_l2},
                      {"buffer_capacity", agent.config.buffer_capacity},
                      {"hidden", agent.config.hidden}};
  header["adam"] = {{"lr", agent.adam.lr},
                    {"beta1", agent.adam.beta1},
                    {"beta2", agent.adam.beta2},
                    {"eps", agent.adam.eps}};
  header["normalizer"] = {{"d_c_clip", agent.normalizer.d_c_clip},
                          {"chi_scale", agent.normalizer.chi_scale},
                          {"d_wp_scale", agent.normalizer.d_wp_scale},
                          {"r_scale", agent.normalizer.r_scale}};
  header["action_limit"] = agent.action_limit;
  header["step_count"] = agent.step_count;
  header["adam_t"] = {{"actor", agent.actor_opt.t},
                      {"critic", agent.critic_opt.t}};
  header["rng"] = {{"noise", agent.noise_rng.serialize()},
                   {"sample", agent.sample_rng.serialize()}};
  header["doubles"] = blob.size();
  const std::string htext = header.dump();

  std::string out;
  out.reserve(8 + 4 + htext.size() + blob.size() * sizeof(double) + 8);
  out.append(kMagic, sizeof kMagic);
  const std::uint32_t hlen = std::uint32_t(htext.size());
  out.append(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  out.append(htext);
  out.append(reinterpret_cast<const char*>(blob.data()),
             blob.size() * sizeof(double));
  const std::uint64_t sum = RngStream::fnv1a64(out);
  out.append(reinterpret_cast<const char*>(&sum), sizeof sum);
  return out;
}

void save_checkpoint(const DdpgAgent& agent, const std::string& path) {
  const std::string bytes = checkpoint_bytes(agent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  out.flush();
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

DdpgAgent agent_from_bytes(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + 4 + 8)
    throw CheckpointError("checkpoint: file truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw CheckpointError("checkpoint: bad magic (not a policy file or "
                          "unsupported version)");

  std::uint64_t stored_sum = 0;
  std::memcpy(&stored_sum, bytes.data() + bytes.size() - 8, 8);
  const std::uint64_t sum =
      RngStream::fnv1a64(std::string_view(bytes.data(), bytes.size() - 8));
  if (sum != stored_sum)
    throw CheckpointError("checkpoint: checksum mismatch (corrupt file)");

  std::uint32_t hlen = 0;
  std::memcpy(&hlen, bytes.data() + 8, 4);
  const std::size_t header_begin = 12;
  if (header_begin + hlen + 8 > bytes.size())
    throw CheckpointError("checkpoint: file truncated");

  json header;
  try {
    header = json::parse(bytes.substr(header_begin, hlen));
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: bad header: ") + e.what());
  }

  DdpgAgent agent = [&] {
    try {
      if (header.at("format").get<int>() != 1)
        throw CheckpointError("checkpoint: unsupported format version");
      DdpgConfig cfg;
      const json& c = header.at("config");
      cfg.lr = c.at("lr").get<double>();
      cfg.gamma = c.at("gamma").get<double>();
      cfg.batch = c.at("batch").get<int>();
      cfg.tau = c.at("tau").get<double>();
      cfg.noise_sigma = c.at("noise_sigma").get<double>();
      cfg.noise_mu = c.at("noise_mu").get<double>();
      cfg.update_every = c.at("update_every").get<int>();
      cfg.total_steps = c.at("total_steps").get<long>();
      cfg.warmup_steps = c.at("warmup_steps").get<long>();
      cfg.actor_lr = c.at("actor_lr").get<double>();
      cfg.action_l2 = c.at("action_l2").get<double>();
      cfg.buffer_capacity = c.at("buffer_capacity").get<std::size_t>();
      cfg.hidden = c.at("hidden").get<std::vector<int>>();
      DdpgAgent a = DdpgAgent::make(cfg, 0);
      const json& ad = header.at("adam");
      a.adam.lr = ad.at("lr").get<double>();
      a.adam.beta1 = ad.at("beta1").get<double>();
      a.adam.beta2 = ad.at("beta2").get<double>();
      a.adam.eps = ad.at("eps").get<double>();
      const json& nm = header.at("normalizer");
      a.normalizer.d_c_clip = nm.at("d_c_clip").get<double>();
      a.normalizer.chi_scale = nm.at("chi_scale").get<double>();
      a.normalizer.d_wp_scale = nm.at("d_wp_scale").get<double>();
      a.normalizer.r_scale = nm.at("r_scale").get<double>();
      a.action_limit = header.at("action_limit").get<double>();
      a.step_count = header.at("step_count").get<long>();
      a.actor_opt.t = header.at("adam_t").at("actor").get<long>();
      a.critic_opt.t = header.at("adam_t").at("critic").get<long>();
      a.noise_rng = RngStream::deserialize(
          header.at("rng").at("noise").get<std::string>());
      a.sample_rng = RngStream::deserialize(
          header.at("rng").at("sample").get<std::string>());
      return a;
    } catch (const json::exception& e) {
      throw CheckpointError(std::string("checkpoint: bad header: ") +
                            e.what());
    }
  }();

  const std::size_t promised = header.at("doubles").get<std::size_t>();
  const std::size_t blob_bytes = bytes.size() - header_begin - hlen - 8;
  if (blob_bytes != promised * sizeof(double))
    throw CheckpointError("checkpoint: parameter block size disagrees with "
                          "the header");
  std::vector<double> blob(promised);
  std::memcpy(blob.data(), bytes.data() + header_begin + hlen, blob_bytes);

  DoubleReader reader(blob.data(), blob.size());
  reader.fill_net(agent.actor);
  reader.fill_net(agent.critic);
  reader.fill_net(agent.actor_target);
  reader.fill_net(agent.critic_target);
  reader.fill_opt(agent.actor_opt);
  reader.fill_opt(agent.critic_opt);
  if (reader.used() != blob.size())
    throw CheckpointError("checkpoint: parameter block longer than the "
                          "network shapes require");
  return agent;
}

DdpgAgent load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return agent_from_bytes(buf.str());
}

}  // namespace shiplab
