/* Minimal consumer of the fbounds C ABI.
 *
 * Build (from the workspace root, after `cargo build -p fbounds-ffi`):
 *
 *   cc crates/ffi/examples/demo.c \
 *      -Icrates/ffi/include \
 *      target/debug/libfbounds_ffi.a -lm -o demo
 *
 * Profiles a 3-qubit GHZ reference, then evaluates the entanglement and
 * coherence lower bounds for a noisy preparation of it.
 */

#include <stdio.h>
#include <stdlib.h>

#include "fbounds.h"

static void fail(const char *where) {
    fprintf(stderr, "%s: %s\n", where, fb_last_error());
    exit(1);
}

int main(void) {
    printf("fbounds %s\n", fb_version());

    FbState *phi = NULL;
    if (fb_state_from_spec("ghz:3", &phi) != FbStatus_Ok)
        fail("reference state");

    FbProfile *profile = NULL;
    if (fb_profile_new(phi, &profile) != FbStatus_Ok)
        fail("profile");
    printf("s1' = %g, m' = %zu\n",
           fb_profile_s1_prime(profile), fb_profile_m_prime(profile));

    FbState *rho = NULL;
    if (fb_state_from_spec("wnoise:ghz:3:p=0.9", &rho) != FbStatus_Ok)
        fail("noisy state");

    double fidelity = 0.0;
    if (fb_state_fidelity(rho, phi, &fidelity) != FbStatus_Ok)
        fail("fidelity");
    printf("fidelity = %.6f\n", fidelity);

    FbGmeBounds g;
    if (fb_gme_bounds(profile, rho, &g) != FbStatus_Ok)
        fail("entanglement bounds");
    printf("cren >= %.6f, concurrence >= %.6f, geometric >= %.6f\n",
           g.cren, g.concurrence, g.geometric);

    FbCoherenceBounds c;
    if (fb_coherence_bounds(profile, rho, &c) != FbStatus_Ok)
        fail("coherence bounds");
    printf("l1 >= %.6f, formation >= %.6f (branch %d)\n",
           c.l1, c.formation, (int)c.formation_branch);

    fb_state_free(rho);
    fb_profile_free(profile);
    fb_state_free(phi);
    return 0;
}
