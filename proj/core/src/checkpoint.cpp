#include "metaview/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace metaview {

namespace {

constexpr char kMagic[8] = {'M', 'V', 'C', 'K', '0', '0', '0', '1'};

template <typename T> void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T> T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    fail(Errc::ingest, "truncated checkpoint");
  return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      write_pod(out, m(r, c));
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = read_pod<double>(in);
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params,
                     const Adam* optimizer) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(Errc::ingest, "cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint64_t>(out, params.size());
  for (const auto& [name, t] : params.items()) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(t.rows()));
    write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(t.cols()));
    write_matrix(out, t.value());
  }
  const bool with_opt = optimizer && optimizer->states().size() == params.size();
  write_pod<std::uint8_t>(out, with_opt ? 1 : 0);
  if (with_opt) {
    for (const auto& state : optimizer->states()) {
      write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(state.t));
      write_matrix(out, state.m);
      write_matrix(out, state.v);
    }
  }
  if (!out)
    fail(Errc::ingest, "failed while writing checkpoint: " + path.string());
}

void load_checkpoint(const std::filesystem::path& path, ParamStore& params, Adam* optimizer) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(Errc::ingest, "cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(Errc::ingest, "not a checkpoint file (bad magic): " + path.string());
  const auto count = read_pod<std::uint64_t>(in);
  if (count != params.size())
    fail(Errc::ingest, "checkpoint holds " + std::to_string(count) + " parameters, expected " +
                           std::to_string(params.size()));
  for (auto& [name, t] : params.items()) {
    const auto name_len = read_pod<std::uint32_t>(in);
    std::string stored(name_len, '\0');
    in.read(stored.data(), name_len);
    if (!in || stored != name)
      fail(Errc::ingest, "checkpoint parameter '" + stored + "' does not match expected '" +
                             name + "'");
    const auto rows = read_pod<std::uint64_t>(in);
    const auto cols = read_pod<std::uint64_t>(in);
    if (rows != static_cast<std::uint64_t>(t.rows()) ||
        cols != static_cast<std::uint64_t>(t.cols()))
      fail(Errc::ingest, "checkpoint shape mismatch for parameter '" + name + "'");
    Eigen::MatrixXd value(t.rows(), t.cols());
    read_matrix(in, value);
    t.set_value(value);
  }
  const auto with_opt = read_pod<std::uint8_t>(in);
  if (with_opt && optimizer) {
    auto& states = optimizer->states();
    states.clear();
    for (const auto& [name, t] : params.items()) {
      Adam::State s;
      s.t = static_cast<std::int64_t>(read_pod<std::uint64_t>(in));
      s.m.resize(t.rows(), t.cols());
      s.v.resize(t.rows(), t.cols());
      read_matrix(in, s.m);
      read_matrix(in, s.v);
      states.push_back(std::move(s));
    }
  }
}

} // namespace metaview
