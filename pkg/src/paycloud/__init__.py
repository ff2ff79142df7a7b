"""paycloud: a deterministic payroll engine inside an emulated cloud runtime.

The package splits into a pure computation core (`paycloud.core`,
`paycloud.money`) and the runtime around it: durable store (`paycloud.store`),
task queue with autoscaling workers (`paycloud.queue`), shared TTL/LRU cache
(`paycloud.cache`), the HTTP gateway with version traffic splitting
(`paycloud.gateway`), and the admin CLI with the throughput benchmark
(`paycloud.cli`, `paycloud.bench`).
"""

__version__ = "0.1.0"
