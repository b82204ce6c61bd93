#include <benchmark/benchmark.h>

#include "metaview/encoder.hpp"
#include "metaview/heads.hpp"
#include "metaview/synth.hpp"
#include "metaview/train.hpp"

using namespace metaview;

namespace {

struct Setup {
  ViewConfig views;
  EncoderConfig enc;
  ParamStore store;
  EncoderParams params;
  std::vector<ViewBundle> bundles;

  explicit Setup(Eigen::Index d_h) {
    views.d_pad = 32;
    views.d_u = 16;
    views.d_z = 32;
    enc.d_h = d_h;
    Rng init(1);
    params = init_encoder_params(store, enc, views, init);
    Rng rng(2);
    for (int i = 0; i < 8; ++i) {
      SynthParams p;
      p.n = rng.uniform_int(10, 24);
      p.m = 2;
      p.features = SynthFeatures::gaussian;
      p.feature_dim = 8;
      bundles.push_back(
          build_views(synth_graph(SynthFamily::barabasi_albert, p, rng.next_u64()), views));
    }
  }
};

void BM_EncodeGraphEval(benchmark::State& state) {
  Setup setup(state.range(0));
  Rng unused(0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_graph(setup.bundles[i % setup.bundles.size()],
                                          setup.params, setup.enc, Mode::eval, unused));
    ++i;
  }
}
BENCHMARK(BM_EncodeGraphEval)->Arg(64)->Arg(128)->Arg(256);

void BM_EpisodeForwardBackward(benchmark::State& state) {
  Setup setup(state.range(0));
  Rng noise(3);
  for (auto _ : state) {
    std::vector<Tensor> hs;
    for (const auto& bundle : setup.bundles)
      hs.push_back(encode_graph(bundle, setup.params, setup.enc, Mode::train, noise).h);
    Tensor support = concat_rows({hs[0], hs[1], hs[2], hs[3]});
    Tensor query = concat_rows({hs[4], hs[5], hs[6], hs[7]});
    Tensor logits = proto_logits(support, {0, 0, 1, 1}, query, 2);
    Tensor loss = cross_entropy_sum(logits, {0, 0, 1, 1});
    benchmark::DoNotOptimize(loss.backward_table());
  }
}
BENCHMARK(BM_EpisodeForwardBackward)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
