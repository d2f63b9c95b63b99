#pragma once

#include <vector>

#include "mfvar/linalg.hpp"
#include "mfvar/mixture.hpp"
#include "mfvar/priors.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

// h_t = mu + phi (h_{t-1} - mu) + sigma eta_t, h_1 from the stationary law.
struct SvParams {
  double mu = 0.0;
  double phi = 0.9;
  double sigma = 0.2;
};

inline constexpr double kLogSquareOffset = 1e-8;
inline constexpr double kPhiProposalSd = 0.1;

// log(e^2 + offset), elementwise
VectorXd log_square(const VectorXd& e);

// Conditional component probabilities of one observation.
std::array<double, MixtureTable::kComponents> indicator_probabilities(double ystar, double h,
                                                                      const MixtureTable& table = MixtureTable::omori());

std::vector<int> sample_mixture_indicators(const VectorXd& ystar, const VectorXd& h, RngStream& rng,
                                           const MixtureTable& table = MixtureTable::omori());

// Forward filtering, backward sampling of h given y*_t = h_t + m_{s_t} + e_t.
// `noise` holds the T standard normals used backwards; zero noise returns the
// smoothed mean.
VectorXd draw_logvol_path(const VectorXd& ystar, const std::vector<int>& s, const SvParams& par,
                          const VectorXd& noise, const MixtureTable& table = MixtureTable::omori());
VectorXd draw_logvol_path(const VectorXd& ystar, const std::vector<int>& s, const SvParams& par, RngStream& rng,
                          const MixtureTable& table = MixtureTable::omori());

// Log posterior kernel of phi given the path; -inf outside (-1, 1). An empty
// path leaves only the prior.
double sv_phi_log_target(const VectorXd& h, double mu, double sigma, double phi, const FsvPriorConfig& prior);

// Random-walk Metropolis step on phi.
double draw_phi(const VectorXd& h, double mu, double sigma, double phi, const FsvPriorConfig& prior, RngStream& rng,
                bool* accepted = nullptr);

struct SvUpdate {
  SvParams params;
  VectorXd h;  // path after the interweaving move
  bool phi_accepted = false;
  bool sigma_accepted = false;
};

// Centred draws of mu, phi, sigma given h, then one interweaving move that
// redraws (mu, sigma) in the non-centred parametrisation given (y*, s).
// fixed_mean keeps mu at 0 (factor chains).
SvUpdate draw_sv_params(const VectorXd& h, const SvParams& current, const VectorXd& ystar, const std::vector<int>& s,
                        bool fixed_mean, const FsvPriorConfig& prior, RngStream& rng,
                        const MixtureTable& table = MixtureTable::omori());

}  // namespace mfvar
