/** Service answered with an error envelope. */
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail.message);
        this.status = status;
        this.detail = detail;
        this.name = "ApiError";
    }
}
/** The request never reached the service (offline, refused, aborted). */
export class NetworkError extends Error {
    constructor(cause) {
        super(`service unreachable: ${String(cause)}`);
        this.name = "NetworkError";
    }
}
async function parseEnvelope(response) {
    const body = await response.json();
    if (!response.ok || body.status === "error") {
        const detail = body.error ?? {
            code: "unknown",
            message: `unexpected status ${response.status}`,
        };
        throw new ApiError(response.status, detail);
    }
    return body;
}
export class ApiClient {
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async post(path, payload, signal) {
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + path, {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify(payload),
                signal,
            });
        }
        catch (cause) {
            throw new NetworkError(cause);
        }
        return parseEnvelope(response);
    }
    async get(path) {
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + path, { method: "GET" });
        }
        catch (cause) {
            throw new NetworkError(cause);
        }
        return parseEnvelope(response);
    }
    search(panel, k, signal) {
        const payload = {
            query: panel.query,
            model: panel.model,
            k,
            reuse: panel.reuse,
        };
        if (panel.model === "pnorm") {
            payload.p = panel.p;
        }
        return this.post("/api/search", payload, signal);
    }
    feedback(payload) {
        return this.post("/api/feedback", payload);
    }
    expand(query, mTop, kConcepts) {
        return this.post("/api/expand", {
            query,
            m_top: mTop,
            k_concepts: kConcepts,
        });
    }
    async queries() {
        const body = await this.get("/api/queries");
        return body.queries;
    }
}
