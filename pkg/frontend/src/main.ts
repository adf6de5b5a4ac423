import { bootstrap, HttpApi } from "./app.js";

void bootstrap(document, new HttpApi());
