#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "ssgbnp/model.hpp"

namespace ssgbnp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random instance: rewards U_int[5,10], penalties U_int[0,5], costs U_int[1,100],
/// budget h/(H+1) * sum(w) + U[0.05,0.95], uniform type probabilities.
GameSSG generate(int n_targets, int n_attackers, int h, int H, std::int64_t seed);

/// `ssg_n{n}_k{k}_h{h}_s{seed}.json`
std::string instance_filename(int n_targets, int n_attackers, int h, std::int64_t seed);

std::string render_instance(const GameSSG& g);
std::string render_instance(const GameSG& g);

/// Parses either file schema; the result is validated.
Instance parse_instance(const std::string& text);

Instance load_instance(const std::filesystem::path& path);
GameSSG load_ssg(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace ssgbnp
