/** Browser entry point.  Pass ?service=http://host:port to aim the client
 * at a service that is not on the default local address. */

import { DEFAULT_BASE } from "./api.js";
import { mount } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? DEFAULT_BASE;

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");
mount(root, base);
