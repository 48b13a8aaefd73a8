#include "ifobench/ifo.hpp"

#include <ostream>
#include <stdexcept>

namespace ifobench {

Transcript::Transcript(int n) : n_(n), per_component_(static_cast<std::size_t>(n), 0) {
  if (n < 1) throw std::invalid_argument("Transcript: n must be positive");
}

long long Transcript::component_calls(int i) const {
  if (i < 0 || i >= n_) throw std::invalid_argument("Transcript::component_calls: index out of range");
  return per_component_[static_cast<std::size_t>(i)];
}

void Transcript::append(int component, const Point& x, double value, const Point& grad) {
  if (component < 0 || component >= n_) throw std::invalid_argument("Transcript::append: index out of range");
  entries_.push_back({total_calls(), component, x, value, grad});
  ++per_component_[static_cast<std::size_t>(component)];
}

void Transcript::write_csv(std::ostream& out) const {
  out << "call_index,i,x_norm,value,g_norm\n";
  for (const TranscriptEntry& e : entries_)
    out << e.call_index << ',' << e.component << ',' << fmt_double(norm(e.x)) << ',' << fmt_double(e.value) << ','
        << fmt_double(norm(e.grad)) << '\n';
}

void Transcript::write_binary_sidecar(std::ostream& out) const {
  auto put = [&](double v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); };
  for (const TranscriptEntry& e : entries_) {
    put(static_cast<double>(e.call_index));
    put(static_cast<double>(e.component));
    put(static_cast<double>(e.x.size()));
    for (double v : e.x) put(v);
    put(e.value);
    for (double v : e.grad) put(v);
  }
}

StaticIfo::StaticIfo(const FiniteSumProblem& problem) : problem_(problem), transcript_(problem.n()) {}

IfoAnswer StaticIfo::query(int i, const Point& x) {
  if (!all_finite(x)) throw std::invalid_argument("StaticIfo::query: non-finite query point");
  const ComponentEval e = problem_.component(i, x);
  transcript_.append(i, x, e.value, e.grad);
  return {e.value, e.grad};
}

}  // namespace ifobench
