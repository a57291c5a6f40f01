#include "cfplan/gan/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cfplan/errors.hpp"
#include "cfplan/gan/losses.hpp"
#include "cfplan/nn/checkpoint.hpp"
#include "cfplan/version.hpp"

namespace cfplan::gan {
namespace {

using nn::Mode;
using nn::Tensor;

struct PreparedScenario {
  Tensor<float> mask;
  std::vector<std::array<float, 2>> free_points;
  std::vector<std::array<float, 2>> collision_points;
};

Tensor<float> sample_points(const std::vector<std::array<float, 2>>& pool, int batch, Rng& rng) {
  Tensor<float> out({static_cast<std::size_t>(batch), 2});
  for (int n = 0; n < batch; ++n) {
    const auto& p = pool[rng.index(pool.size())];
    out.at(n, 0) = p[0];
    out.at(n, 1) = p[1];
  }
  return out;
}

Tensor<float> sample_latent(int batch, Rng& rng) {
  Tensor<float> out({static_cast<std::size_t>(batch), 2});
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(rng.uniform());
  return out;
}

void validate_config(const TrainConfig& cfg, std::size_t scenario_count) {
  if (cfg.batch < 2) throw std::invalid_argument("train batch size must be >= 2");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.lambda_identity < 0.f || cfg.lambda_feature_match < 0.f) {
    throw std::invalid_argument("loss weights must be >= 0");
  }
  if (scenario_count == 0) throw std::invalid_argument("training needs at least one scenario");
}

}  // namespace

TrainResult train_cgan(Generator<float>& gen, Discriminator<float>& disc,
                       const std::vector<ScenarioData>& data, const TrainConfig& cfg,
                       const EpochCallback& on_epoch) {
  validate_config(cfg, data.size());

  std::vector<PreparedScenario> prepared;
  prepared.reserve(data.size());
  for (const ScenarioData& sd : data) {
    if (sd.grid == nullptr || sd.mask == nullptr) {
      throw std::invalid_argument("scenario data entries need grid and mask");
    }
    PreparedScenario ps;
    ps.mask = mask_to_tensor<float>(*sd.mask);
    for (const LabeledGrid::Point& p : sd.grid->points) {
      (p.label == kLabelFree ? ps.free_points : ps.collision_points).push_back({p.n1, p.n2});
    }
    if (ps.free_points.empty()) {
      throw std::invalid_argument("scenario has no collision-free grid points");
    }
    prepared.push_back(std::move(ps));
  }

  gen.init(derive_seed(cfg.seed, 1));
  disc.init(derive_seed(cfg.seed, 2));
  Rng rng(derive_seed(cfg.seed, 3));

  nn::Adam<float> adam_gen(cfg.adam);
  nn::Adam<float> adam_disc(cfg.adam);
  const auto gen_state = gen.state();
  const auto disc_state = disc.state();

  const int steps = cfg.steps_per_epoch > 0 ? cfg.steps_per_epoch
                                            : static_cast<int>(prepared.size());
  std::vector<std::size_t> order(prepared.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const auto save_diagnostic = [&] {
    if (cfg.diagnostic_path.empty()) return;
    std::vector<nn::ParamRef<float>> all = gen.state();
    const auto ds = disc.state();
    all.insert(all.end(), ds.begin(), ds.end());
    nn::save_checkpoint(cfg.diagnostic_path, nn::snapshot(all));
  };

  TrainResult result;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t cursor = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    for (int step = 0; step < steps; ++step) {
      if (cursor == 0) rng.shuffle(order);
      const PreparedScenario& ps = prepared[order[cursor]];
      cursor = (cursor + 1) % order.size();

      const Tensor<float> theta_real = sample_points(ps.free_points, cfg.batch, rng);
      const Tensor<float> z = sample_latent(cfg.batch, rng);
      const bool has_collision = !ps.collision_points.empty();
      const Tensor<float> theta_col =
          has_collision ? sample_points(ps.collision_points, cfg.batch, rng) : Tensor<float>();

      double step_d = 0, step_g = 0, step_col = 0, step_id = 0, step_fm = 0;
      try {
        // --- Discriminator update: real up, fake down, collision down.
        nn::zero_grads(disc_state);
        const Tensor<float> dcond = disc.forward_cond(ps.mask, Mode::kTrain);
        Tensor<float> dcond_grad({1, dcond.dim(1)});

        auto real_out = disc.forward_trunk(theta_real, dcond, Mode::kTrain);
        auto real_loss = nll_toward_one(real_out.score);
        nn::accumulate(dcond_grad, disc.backward_trunk(real_loss.grad).second);

        const Tensor<float> fake = gen.forward(z, ps.mask, Mode::kTrain);
        auto fake_out = disc.forward_trunk(fake, dcond, Mode::kTrain);
        auto fake_loss = nll_toward_zero(fake_out.score);
        nn::accumulate(dcond_grad, disc.backward_trunk(fake_loss.grad).second);

        float col_value = 0.f;
        if (has_collision) {
          auto col_out = disc.forward_trunk(theta_col, dcond, Mode::kTrain);
          auto col_loss = nll_toward_zero(col_out.score);
          col_value = col_loss.value;
          nn::accumulate(dcond_grad, disc.backward_trunk(col_loss.grad).second);
        }
        disc.backward_cond(dcond_grad);
        adam_disc.step(disc_state);

        // --- Generator update: non-saturating GAN + identity + feature match.
        nn::zero_grads(gen_state);
        auto real_feat = disc.forward_trunk(theta_real, dcond, Mode::kTrain);
        const std::vector<float> real_mean = column_mean(real_feat.features);

        const Tensor<float> gcond = gen.forward_cond(ps.mask, Mode::kTrain);
        const Tensor<float> fake2 = gen.forward_trunk(z, gcond, Mode::kTrain);
        auto fake2_out = disc.forward_trunk(fake2, dcond, Mode::kTrain);
        auto g_adv = nll_toward_one(fake2_out.score);
        auto fm = feature_match_to_mean(fake2_out.features, real_mean);
        Tensor<float> fm_grad = fm.grad;
        for (float& v : fm_grad.v) v *= cfg.lambda_feature_match;
        const Tensor<float> gtheta = disc.backward_trunk(g_adv.grad, fm_grad).first;
        Tensor<float> gcond_grad = gen.backward_trunk(gtheta).second;

        auto id_out = gen.forward_trunk(theta_real, gcond, Mode::kTrain);
        auto id_loss = mean_sq_row_distance(id_out, theta_real);
        Tensor<float> id_grad = id_loss.grad;
        for (float& v : id_grad.v) v *= cfg.lambda_identity;
        nn::accumulate(gcond_grad, gen.backward_trunk(id_grad).second);
        gen.backward_cond(gcond_grad);
        adam_gen.step(gen_state);

        step_d = real_loss.value + fake_loss.value;
        step_col = col_value;
        step_g = g_adv.value;
        step_id = id_loss.value;
        step_fm = fm.value;
      } catch (const ModelError&) {
        save_diagnostic();
        throw;
      }

      const double total = step_d + step_g + step_col + step_id + step_fm;
      if (!std::isfinite(total)) {
        save_diagnostic();
        throw ModelError("non-finite loss at epoch " + std::to_string(epoch) + " step " +
                         std::to_string(step));
      }
      log.d_loss += step_d;
      log.g_loss += step_g;
      log.collision_loss += step_col;
      log.identity_loss += step_id;
      log.fm_loss += step_fm;
    }
    log.d_loss /= steps;
    log.g_loss /= steps;
    log.collision_loss /= steps;
    log.identity_loss /= steps;
    log.fm_loss /= steps;
    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return result;
}

void write_train_log_csv(const std::string& path, const std::vector<EpochLog>& log,
                         std::uint64_t seed, std::uint64_t config_hash) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write training log: " + path);
  char meta[128];
  std::snprintf(meta, sizeof meta, "# cfplan %s seed=%llu config=%016llx\n", kVersion,
                static_cast<unsigned long long>(seed),
                static_cast<unsigned long long>(config_hash));
  f << meta;
  f << "epoch,d_loss,g_loss,collision_loss,identity_loss,fm_loss,wall_seconds\n";
  for (const EpochLog& e : log) {
    char line[256];
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.3f\n", e.epoch, e.d_loss,
                  e.g_loss, e.collision_loss, e.identity_loss, e.fm_loss, e.wall_seconds);
    f << line;
  }
}

std::vector<EpochLog> read_train_log_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open training log: " + path);
  std::vector<EpochLog> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("epoch,", 0) == 0) continue;
    EpochLog e;
    std::istringstream ss(line);
    char comma;
    ss >> e.epoch >> comma >> e.d_loss >> comma >> e.g_loss >> comma >> e.collision_loss >>
        comma >> e.identity_loss >> comma >> e.fm_loss >> comma >> e.wall_seconds;
    if (!ss) throw DataError("malformed training log line: " + line);
    out.push_back(e);
  }
  return out;
}

}  // namespace cfplan::gan
